//! Text formats: Newick trees, cord and partial-distance files, reports.

pub mod cordfile;
pub mod newick;
pub mod report;

pub use cordfile::{read_cords, read_partial_distances, write_cords, write_partial_distances, CordFileError, PartialDistances};
pub use newick::{parse_newick, print_heights, print_newick, NewickError, ParsedNewick};
