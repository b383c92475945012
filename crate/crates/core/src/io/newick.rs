//! Newick reading and writing.
//!
//! ```text
//! tree    := subtree ";"
//! subtree := leaf | "(" subtree ("," subtree)+ ")" [":" weight]
//! leaf    := label [":" weight]
//! ```
//! Weights are integers, decimals or `p/q`; either every non-root edge is
//! weighted or none is.

use thiserror::Error;

use crate::rational::{format_rational, parse_rational, Rational};
use crate::tree::{LeafLabel, Shape, TreeError, XTree};
use crate::weighting::{EdgeWeighting, HeightMap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NewickError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("either every edge carries a weight or none does")]
    MixedWeights,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedNewick {
    pub tree: XTree,
    pub weights: Option<EdgeWeighting>,
}

const RESERVED: &[char] = &['(', ')', ',', ':', ';'];

struct Parser {
    chars: Vec<char>,
    pos: usize,
    /// Weight of the edge above each parsed node, in pre-order.
    weights: Vec<Option<Rational>>,
}

impl Parser {
    fn location(&self, pos: usize) -> (usize, usize) {
        let mut line = 1;
        let mut column = 1;
        for &c in &self.chars[..pos.min(self.chars.len())] {
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        }
        (line, column)
    }

    fn error_at(&self, pos: usize, message: impl Into<String>) -> NewickError {
        let (line, column) = self.location(pos);
        NewickError::Syntax { line, column, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, want: char) -> Result<(), NewickError> {
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => Err(self.error_at(self.pos, format!("expected `{want}`, found `{c}`"))),
            None => Err(self.error_at(self.pos, format!("expected `{want}`, found end of input"))),
        }
    }

    fn token(&mut self) -> (usize, String) {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && !self.chars[self.pos].is_whitespace() && !RESERVED.contains(&self.chars[self.pos])
        {
            self.pos += 1;
        }
        (start, self.chars[start..self.pos].iter().collect())
    }

    fn weight(&mut self) -> Result<Option<Rational>, NewickError> {
        if self.peek() != Some(':') {
            return Ok(None);
        }
        self.pos += 1;
        let (start, text) = self.token();
        if text.is_empty() {
            return Err(self.error_at(start, "missing weight after `:`"));
        }
        parse_rational(&text).map(Some).map_err(|e| self.error_at(start, e.to_string()))
    }

    fn subtree(&mut self) -> Result<Shape, NewickError> {
        let slot = self.weights.len();
        self.weights.push(None);
        let shape = if self.peek() == Some('(') {
            let open = self.pos;
            self.pos += 1;
            let mut children = vec![self.subtree()?];
            while self.peek() == Some(',') {
                self.pos += 1;
                children.push(self.subtree()?);
            }
            self.expect(')')?;
            if children.len() == 1 {
                return Err(self.error_at(open, TreeError::UnaryVertex.to_string()));
            }
            let (start, label) = self.token();
            if !label.is_empty() {
                return Err(self.error_at(start, "interior vertices cannot carry labels"));
            }
            Shape::Node(children)
        } else {
            let (start, label) = self.token();
            if label.is_empty() {
                let msg = match self.chars.get(self.pos) {
                    Some(c) => format!("expected a leaf label or `(`, found `{c}`"),
                    None => "expected a leaf label or `(`, found end of input".to_string(),
                };
                return Err(self.error_at(start, msg));
            }
            Shape::Leaf(LeafLabel::new(label).map_err(|e| self.error_at(start, e.to_string()))?)
        };
        self.weights[slot] = self.weight()?;
        Ok(shape)
    }
}

pub fn parse_newick(text: &str) -> Result<ParsedNewick, NewickError> {
    let mut p = Parser { chars: text.chars().collect(), pos: 0, weights: Vec::new() };
    let shape = p.subtree()?;
    let root_weight_at = p.pos;
    p.expect(';')?;
    if p.peek().is_some() {
        return Err(p.error_at(p.pos, "unexpected text after `;`"));
    }
    if p.weights[0].is_some() {
        return Err(p.error_at(root_weight_at, "the root edge cannot carry a weight"));
    }
    let (tree, mapping) = XTree::from_shape_mapped(&shape)?;
    let weighted = p.weights[1..].iter().filter(|w| w.is_some()).count();
    let weights = if weighted == 0 {
        None
    } else if weighted + 1 < p.weights.len() {
        return Err(NewickError::MixedWeights);
    } else {
        let mut w = EdgeWeighting::empty(&tree);
        for (node, weight) in p.weights.into_iter().enumerate().skip(1) {
            w.set(mapping[node], weight.expect("all weighted"));
        }
        Some(w)
    };
    Ok(ParsedNewick { tree, weights })
}

/// Canonical child order; weights, when given, are printed exactly.
pub fn print_newick(tree: &XTree, weights: Option<&EdgeWeighting>) -> String {
    let mut out = String::new();
    write_vertex(tree, tree.root(), weights, &mut out);
    out.push(';');
    out
}

fn write_vertex(tree: &XTree, v: crate::tree::VertexId, weights: Option<&EdgeWeighting>, out: &mut String) {
    match tree.label_of(v) {
        Some(label) => out.push_str(label.as_str()),
        None => {
            out.push('(');
            for (i, &c) in tree.children(v).iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_vertex(tree, c, weights, out);
            }
            out.push(')');
        }
    }
    if let Some(w) = weights.and_then(|w| w.get(v)) {
        out.push(':');
        out.push_str(&format_rational(w));
    }
}

pub fn print_heights(heights: &HeightMap) -> String {
    print_newick(heights.tree(), Some(&heights.to_edge_weights()))
}
