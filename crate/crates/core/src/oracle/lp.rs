//! Exact feasibility of linear systems with strict inequalities.
//!
//! Each strict constraint `a·x > b` becomes `a·x - b >= eps`, the system is
//! bounded by `eps <= 1`, and `eps` is maximized with a two-phase simplex
//! using Bland's rule. The system is strictly feasible iff the optimum is
//! positive. Arithmetic is exact: machine-word rationals first, arbitrary
//! precision when a word overflows.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};

use crate::rational::Rational;

/// `Σ coefficient · x[var]` compared against `rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearConstraint {
    pub terms: Vec<(usize, Rational)>,
    pub rhs: Rational,
}

impl LinearConstraint {
    fn lhs_at(&self, point: &[Rational]) -> Rational {
        self.terms.iter().map(|(v, c)| c * &point[*v]).sum()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StrictLinearSystem {
    nonneg: Vec<bool>,
    equalities: Vec<LinearConstraint>,
    strict: Vec<LinearConstraint>,
}

impl StrictLinearSystem {
    /// A system over `num_vars` unrestricted variables.
    pub fn new(num_vars: usize) -> Self {
        StrictLinearSystem { nonneg: vec![false; num_vars], ..Default::default() }
    }

    pub fn add_variable(&mut self, nonneg: bool) -> usize {
        self.nonneg.push(nonneg);
        self.nonneg.len() - 1
    }

    pub fn set_nonneg(&mut self, var: usize) {
        self.nonneg[var] = true;
    }

    pub fn num_vars(&self) -> usize {
        self.nonneg.len()
    }

    pub fn is_nonneg(&self, var: usize) -> bool {
        self.nonneg[var]
    }

    pub fn equalities(&self) -> &[LinearConstraint] {
        &self.equalities
    }

    pub fn strict_inequalities(&self) -> &[LinearConstraint] {
        &self.strict
    }

    /// `Σ terms = rhs`.
    pub fn add_equality(&mut self, terms: Vec<(usize, Rational)>, rhs: Rational) {
        self.check_vars(&terms);
        self.equalities.push(LinearConstraint { terms, rhs });
    }

    /// `Σ terms > rhs`.
    pub fn add_strict(&mut self, terms: Vec<(usize, Rational)>, rhs: Rational) {
        self.check_vars(&terms);
        self.strict.push(LinearConstraint { terms, rhs });
    }

    /// `x[a] = x[b]`.
    pub fn add_equal(&mut self, a: usize, b: usize) {
        self.add_equality(vec![(a, Rational::one()), (b, -Rational::one())], Rational::zero());
    }

    /// `x[a] > x[b]`.
    pub fn add_greater(&mut self, a: usize, b: usize) {
        self.add_strict(vec![(a, Rational::one()), (b, -Rational::one())], Rational::zero());
    }

    fn check_vars(&self, terms: &[(usize, Rational)]) {
        for (v, _) in terms {
            assert!(*v < self.nonneg.len(), "variable {v} out of range");
        }
    }

    /// Exact check of every constraint at `point`.
    pub fn is_satisfied_by(&self, point: &[Rational]) -> bool {
        point.len() == self.num_vars()
            && self.nonneg.iter().zip(point).all(|(&nn, x)| !nn || !x.is_negative())
            && self.equalities.iter().all(|c| c.lhs_at(point) == c.rhs)
            && self.strict.iter().all(|c| c.lhs_at(point) > c.rhs)
    }

    /// A point satisfying every equality, every strict inequality and every
    /// sign constraint, or `None` when no such point exists.
    pub fn strict_feasible(&self) -> Option<Vec<Rational>> {
        let reduced = Reduced::from_system(self)?;
        let class_values = match solve::<Ratio<i64>>(&reduced) {
            Some(result) => result,
            None => solve::<Rational>(&reduced).expect("arbitrary precision cannot overflow"),
        }?;
        let point: Vec<Rational> = reduced.class_of.iter().map(|&c| class_values[c].clone()).collect();
        debug_assert!(self.is_satisfied_by(&point), "simplex returned an infeasible point");
        Some(point)
    }
}

/// The system after merging variables tied by `x[a] = x[b]` equalities.
struct Reduced {
    class_of: Vec<usize>,
    nonneg: Vec<bool>,
    equalities: Vec<LinearConstraint>,
    strict: Vec<LinearConstraint>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn combine(terms: &[(usize, Rational)], map: impl Fn(usize) -> usize) -> Vec<(usize, Rational)> {
    let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
    for (v, c) in terms {
        *acc.entry(map(*v)).or_insert_with(Rational::zero) += c;
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

impl Reduced {
    /// `None` when presolve already proves infeasibility.
    fn from_system(sys: &StrictLinearSystem) -> Option<Reduced> {
        let n = sys.num_vars();
        let mut parent: Vec<usize> = (0..n).collect();
        let mut rest = Vec::new();
        for eq in &sys.equalities {
            let terms = combine(&eq.terms, |v| v);
            match terms.as_slice() {
                [(a, ca), (b, cb)] if eq.rhs.is_zero() && *ca == -cb => {
                    let (ra, rb) = (find(&mut parent, *a), find(&mut parent, *b));
                    parent[ra] = rb;
                }
                _ => rest.push(eq),
            }
        }
        let mut class_id = vec![usize::MAX; n];
        let mut class_of = vec![0; n];
        let mut count = 0;
        for v in 0..n {
            let r = find(&mut parent, v);
            if class_id[r] == usize::MAX {
                class_id[r] = count;
                count += 1;
            }
            class_of[v] = class_id[r];
        }
        let mut nonneg = vec![false; count];
        for v in 0..n {
            nonneg[class_of[v]] |= sys.nonneg[v];
        }
        let mut equalities = Vec::new();
        for eq in rest {
            let terms = combine(&eq.terms, |v| class_of[v]);
            if terms.is_empty() {
                if !eq.rhs.is_zero() {
                    return None;
                }
            } else {
                equalities.push(LinearConstraint { terms, rhs: eq.rhs.clone() });
            }
        }
        let mut strict = Vec::new();
        for s in &sys.strict {
            let terms = combine(&s.terms, |v| class_of[v]);
            if terms.is_empty() {
                if !s.rhs.is_negative() {
                    return None;
                }
            } else {
                strict.push(LinearConstraint { terms, rhs: s.rhs.clone() });
            }
        }
        Some(Reduced { class_of, nonneg, equalities, strict })
    }

    fn classes(&self) -> usize {
        self.nonneg.len()
    }
}

/// Exact field operations; `None` signals overflow.
trait Scalar: Clone + PartialOrd + Sized {
    fn from_rational(q: &Rational) -> Option<Self>;
    fn to_rational(&self) -> Rational;
    fn nil() -> Self;
    fn unit() -> Self;
    fn plus(&self, o: &Self) -> Option<Self>;
    fn minus(&self, o: &Self) -> Option<Self>;
    fn times(&self, o: &Self) -> Option<Self>;
    fn over(&self, o: &Self) -> Option<Self>;
    fn is_nil(&self) -> bool;
    fn is_pos(&self) -> bool;
}

impl Scalar for Ratio<i64> {
    fn from_rational(q: &Rational) -> Option<Self> {
        Some(Ratio::new(q.numer().to_i64()?, q.denom().to_i64()?))
    }
    fn to_rational(&self) -> Rational {
        Rational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn plus(&self, o: &Self) -> Option<Self> {
        self.checked_add(o)
    }
    fn minus(&self, o: &Self) -> Option<Self> {
        self.checked_sub(o)
    }
    fn times(&self, o: &Self) -> Option<Self> {
        self.checked_mul(o)
    }
    fn over(&self, o: &Self) -> Option<Self> {
        self.checked_div(o)
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_pos(&self) -> bool {
        Signed::is_positive(self)
    }
}

impl Scalar for Rational {
    fn from_rational(q: &Rational) -> Option<Self> {
        Some(q.clone())
    }
    fn to_rational(&self) -> Rational {
        self.clone()
    }
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn plus(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn minus(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn times(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn over(&self, o: &Self) -> Option<Self> {
        Some(self / o)
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_pos(&self) -> bool {
        Signed::is_positive(self)
    }
}

struct Tableau<F> {
    rows: Vec<Vec<F>>,
    rhs: Vec<F>,
    basis: Vec<usize>,
    /// Reduced costs of the current objective (maximization).
    cost: Vec<F>,
    value: F,
}

enum Outcome {
    Optimal,
    Unbounded,
    /// Stopped as soon as the objective became positive.
    Positive,
}

impl<F: Scalar> Tableau<F> {
    fn pivot(&mut self, r: usize, c: usize) -> Option<()> {
        let p = self.rows[r][c].clone();
        for x in self.rows[r].iter_mut() {
            *x = x.over(&p)?;
        }
        self.rhs[r] = self.rhs[r].over(&p)?;
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_nil() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for (x, y) in self.rows[i].iter_mut().zip(&pivot_row) {
                if !y.is_nil() {
                    *x = x.minus(&f.times(y)?)?;
                }
            }
            self.rhs[i] = self.rhs[i].minus(&f.times(&pivot_rhs)?)?;
        }
        if !self.cost[c].is_nil() {
            let f = self.cost[c].clone();
            for (x, y) in self.cost.iter_mut().zip(&pivot_row) {
                if !y.is_nil() {
                    *x = x.minus(&f.times(y)?)?;
                }
            }
            self.value = self.value.plus(&f.times(&pivot_rhs)?)?;
        }
        self.basis[r] = c;
        Some(())
    }

    fn set_objective(&mut self, c: &[F]) -> Option<()> {
        let mut cost = c.to_vec();
        let mut value = F::nil();
        for (i, &b) in self.basis.iter().enumerate() {
            if c[b].is_nil() {
                continue;
            }
            for (x, y) in cost.iter_mut().zip(&self.rows[i]) {
                if !y.is_nil() {
                    *x = x.minus(&c[b].times(y)?)?;
                }
            }
            value = value.plus(&c[b].times(&self.rhs[i])?)?;
        }
        self.cost = cost;
        self.value = value;
        Some(())
    }

    /// Bland's rule: the lowest-index improving column enters, ratio ties go
    /// to the lowest-index basic variable.
    fn maximize(&mut self, allowed: usize, stop_when_positive: bool) -> Option<Outcome> {
        loop {
            if stop_when_positive && self.value.is_pos() {
                return Some(Outcome::Positive);
            }
            let Some(c) = (0..allowed).find(|&j| self.cost[j].is_pos()) else {
                return Some(Outcome::Optimal);
            };
            let mut best: Option<(usize, F)> = None;
            for i in 0..self.rows.len() {
                if !self.rows[i][c].is_pos() {
                    continue;
                }
                let ratio = self.rhs[i].over(&self.rows[i][c])?;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, _)) = best else {
                return Some(Outcome::Unbounded);
            };
            self.pivot(r, c)?;
        }
    }
}

/// Outer `None` means overflow; inner `None` means infeasible.
fn solve<F: Scalar>(red: &Reduced) -> Option<Option<Vec<Rational>>> {
    // Column layout: class columns (split when unrestricted), eps, one slack
    // per strict row, the slack of `eps <= 1`, then one artificial per row.
    let mut pos_col = Vec::with_capacity(red.classes());
    let mut neg_col = Vec::with_capacity(red.classes());
    let mut next = 0;
    for &nn in &red.nonneg {
        pos_col.push(next);
        next += 1;
        if nn {
            neg_col.push(None);
        } else {
            neg_col.push(Some(next));
            next += 1;
        }
    }
    let eps = next;
    let first_slack = eps + 1;
    let bound_slack = first_slack + red.strict.len();
    let structural = bound_slack + 1;
    let m = red.equalities.len() + red.strict.len() + 1;
    let width = structural + m;

    let mut rows: Vec<Vec<F>> = Vec::with_capacity(m);
    let mut rhs: Vec<F> = Vec::with_capacity(m);
    let mut push_row = |terms: &[(usize, Rational)], extra: &[(usize, F)], b: &Rational| -> Option<()> {
        let mut row = vec![F::nil(); width];
        for (class, coef) in terms {
            let c = F::from_rational(coef)?;
            row[pos_col[*class]] = c.clone();
            if let Some(nc) = neg_col[*class] {
                row[nc] = F::nil().minus(&c)?;
            }
        }
        for (col, v) in extra {
            row[*col] = v.clone();
        }
        let mut b = F::from_rational(b)?;
        if b < F::nil() {
            for x in row.iter_mut() {
                if !x.is_nil() {
                    *x = F::nil().minus(x)?;
                }
            }
            b = F::nil().minus(&b)?;
        }
        let i = rows.len();
        row[structural + i] = F::unit();
        rows.push(row);
        rhs.push(b);
        Some(())
    };
    let minus_one = F::nil().minus(&F::unit())?;
    for eq in &red.equalities {
        push_row(&eq.terms, &[], &eq.rhs)?;
    }
    for (k, s) in red.strict.iter().enumerate() {
        push_row(&s.terms, &[(eps, minus_one.clone()), (first_slack + k, minus_one.clone())], &s.rhs)?;
    }
    push_row(&[], &[(eps, F::unit()), (bound_slack, F::unit())], &Rational::one())?;

    let mut tab = Tableau { rows, rhs, basis: (structural..width).collect(), cost: Vec::new(), value: F::nil() };

    let mut phase1 = vec![F::nil(); width];
    for c in phase1.iter_mut().skip(structural) {
        *c = minus_one.clone();
    }
    tab.set_objective(&phase1)?;
    tab.maximize(structural, false)?;
    if tab.value.is_pos() || !tab.value.is_nil() {
        return Some(None);
    }
    for i in 0..m {
        if tab.basis[i] < structural {
            continue;
        }
        if let Some(c) = (0..structural).find(|&j| !tab.rows[i][j].is_nil()) {
            tab.pivot(i, c)?;
        }
    }

    let mut phase2 = vec![F::nil(); width];
    phase2[eps] = F::unit();
    tab.set_objective(&phase2)?;
    match tab.maximize(structural, true)? {
        Outcome::Unbounded => unreachable!("eps is bounded above by one"),
        Outcome::Optimal if !tab.value.is_pos() => return Some(None),
        _ => {}
    }

    let mut values = vec![F::nil(); width];
    for (i, &b) in tab.basis.iter().enumerate() {
        values[b] = tab.rhs[i].clone();
    }
    let classes = (0..red.classes())
        .map(|k| {
            let v = values[pos_col[k]].to_rational();
            match neg_col[k] {
                Some(nc) => v - values[nc].to_rational(),
                None => v,
            }
        })
        .collect();
    Some(Some(classes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn open_interval() {
        let mut sys = StrictLinearSystem::new(1);
        sys.add_strict(vec![(0, int(1))], int(0));
        sys.add_strict(vec![(0, int(-1))], int(-1));
        let x = sys.strict_feasible().unwrap();
        assert!(x[0] > int(0) && x[0] < int(1));
    }

    #[test]
    fn contradictory_bounds() {
        let mut sys = StrictLinearSystem::new(1);
        sys.add_strict(vec![(0, int(1))], int(0));
        sys.add_strict(vec![(0, int(-1))], int(0));
        assert!(sys.strict_feasible().is_none());
    }

    #[test]
    fn strictness_is_respected_at_the_boundary() {
        // x >= 0 and x > 0 and x = 0 would be feasible without strictness
        let mut sys = StrictLinearSystem::new(1);
        sys.set_nonneg(0);
        sys.add_equality(vec![(0, int(2))], int(0));
        sys.add_strict(vec![(0, int(1))], int(0));
        assert!(sys.strict_feasible().is_none());
        let mut sys = StrictLinearSystem::new(2);
        sys.add_equal(0, 1);
        sys.add_greater(0, 1);
        assert!(sys.strict_feasible().is_none());
    }

    #[test]
    fn free_variables_can_go_negative() {
        let mut sys = StrictLinearSystem::new(2);
        sys.add_strict(vec![(0, int(-1))], int(3));
        sys.add_equality(vec![(0, int(1)), (1, int(1))], frac(1, 2));
        let x = sys.strict_feasible().unwrap();
        assert!(x[0] < int(-3));
        assert_eq!(&x[0] + &x[1], frac(1, 2));
        let mut nonneg = sys.clone();
        nonneg.set_nonneg(0);
        assert!(nonneg.strict_feasible().is_none());
    }

    #[test]
    fn inconsistent_equalities() {
        let mut sys = StrictLinearSystem::new(2);
        sys.add_equality(vec![(0, int(1)), (1, int(1))], int(1));
        sys.add_equality(vec![(0, int(2)), (1, int(2))], int(3));
        assert!(sys.strict_feasible().is_none());
    }

    #[test]
    fn large_coefficients_fall_back_to_big_arithmetic() {
        let big = Rational::new(BigInt::from(i64::MAX) * BigInt::from(8), BigInt::from(3));
        let mut sys = StrictLinearSystem::new(2);
        sys.add_strict(vec![(0, int(1))], big.clone());
        sys.add_strict(vec![(0, int(-1)), (1, int(1))], big.clone());
        let x = sys.strict_feasible().unwrap();
        assert!(x[1] > &big + &big);
    }

    /// Every rational in [-3, 3] with denominator at most 4.
    fn grid() -> Vec<Rational> {
        let mut pts: Vec<Rational> =
            (1..=4).flat_map(|d| (-3 * d..=3 * d).map(move |n| frac(n, d))).collect();
        pts.sort();
        pts.dedup();
        pts
    }

    #[test]
    fn agrees_with_grid_search() {
        let grid = grid();
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let (mut feasible, mut infeasible) = (0, 0);
        for _ in 0..200 {
            let mut sys = StrictLinearSystem::new(3);
            for v in 0..3 {
                if rng.gen_bool(0.5) {
                    sys.set_nonneg(v);
                }
                // keep every feasible region inside the grid box
                sys.add_strict(vec![(v, int(1))], int(-3));
                sys.add_strict(vec![(v, int(-1))], int(-3));
            }
            let random_terms = |rng: &mut ChaCha8Rng| -> Vec<(usize, Rational)> {
                (0..3).map(|v| (v, int(rng.gen_range(-1..=1)))).filter(|(_, c)| !c.is_zero()).collect()
            };
            for _ in 0..rng.gen_range(1..=3) {
                let t = random_terms(&mut rng);
                sys.add_strict(t, int(rng.gen_range(-2..=2)));
            }
            if rng.gen_bool(0.3) {
                let t = random_terms(&mut rng);
                sys.add_equality(t, int(rng.gen_range(-1..=1)));
            }
            let lp = sys.strict_feasible();
            if let Some(p) = &lp {
                assert!(sys.is_satisfied_by(p));
            }
            let mut hit = false;
            'search: for x in &grid {
                for y in &grid {
                    for z in &grid {
                        if sys.is_satisfied_by(&[x.clone(), y.clone(), z.clone()]) {
                            hit = true;
                            break 'search;
                        }
                    }
                }
            }
            assert_eq!(lp.is_some(), hit, "{sys:?}");
            if hit {
                feasible += 1;
            } else {
                infeasible += 1;
            }
        }
        assert!(feasible > 20 && infeasible > 20, "{feasible} feasible, {infeasible} infeasible");
    }

    /// Homogeneous difference constraints `x_a > x_b`, `x_a = x_b` over
    /// nonnegative variables are feasible iff the merged constraint digraph
    /// is acyclic.
    #[test]
    fn difference_systems_match_cycle_detection() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let n = rng.gen_range(2..=6);
            let mut sys = StrictLinearSystem::new(n);
            (0..n).for_each(|v| sys.set_nonneg(v));
            let mut arcs = Vec::new();
            let mut ties = Vec::new();
            for _ in 0..rng.gen_range(1..=n + 2) {
                let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
                if rng.gen_bool(0.3) {
                    sys.add_equal(a, b);
                    ties.push((a, b));
                } else {
                    sys.add_greater(a, b);
                    arcs.push((a, b));
                }
            }
            let mut parent: Vec<usize> = (0..n).collect();
            for &(a, b) in &ties {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
            let class: Vec<usize> = (0..n).map(|v| find(&mut parent, v)).collect();
            // longest-path relaxation still changes after n rounds iff there is a cycle
            let mut level = vec![0usize; n];
            let mut changed = true;
            for _ in 0..=n {
                changed = false;
                for &(a, b) in &arcs {
                    let (ca, cb) = (class[a], class[b]);
                    if level[ca] < level[cb] + 1 {
                        level[ca] = level[cb] + 1;
                        changed = true;
                    }
                }
                if !changed {
                    break;
                }
            }
            let acyclic = !changed;
            assert_eq!(sys.strict_feasible().is_some(), acyclic, "{sys:?}");
        }
    }
}
