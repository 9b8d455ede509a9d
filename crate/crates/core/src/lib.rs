//! Edge colorings of the triangular lattice `T_n` by `{0, 1, 3, m}` and the
//! combinatorics of their 3 and m lozenges.
//!
//! A color map assigns one of four colors to each edge so that every
//! triangular face reads one of eight admissible triples. The number of m
//! and 3 edges depends only on the boundary, through the inversion counts
//! `G(C, l)` of the three side strings:
//!
//! ```text
//! m(C) = G₀ + G₁ + G₂ − n₀n₁        s(C) = 2n₀n₁ − G₀ − G₁ − G₂
//! ```
//!
//! Modules:
//! - [`lattice`]: vertices, edges, faces and sides of `T_n`;
//! - [`colormap`]: colors, face rules, boundaries and the map type;
//! - [`enumerate`]: exhaustive search for maps with a given boundary;
//! - [`transforms`]: arrows, replacements and reduction when `G₂ = 0`;
//! - [`gash`]: gash propagation lowering `G₂` by one;
//! - [`paths`]: reduced maps as non-intersecting paths, and their LGV count;
//! - [`render`]: SVG output.

pub mod colormap;
pub mod enumerate;
pub mod error;
pub mod gash;
pub mod lattice;
pub mod paths;
pub mod render;
pub mod transforms;

pub use colormap::{
    predict_counts, predict_puzzle_counts, string_g, BoundaryCondition, Color, ColorMap,
};
pub use enumerate::{count, count_parallel, enumerate, enumerate_parallel, naive_filter};
pub use error::{Error, Result};
pub use gash::{decrement_g2, ConfigKind, Decrement, DecrementCase, Gash, GashedMap};
pub use lattice::{Dir, EdgeId, FaceId, Lattice, Orientation, Vertex};
pub use paths::{extract_paths, is_reduced, lgv_count, step_counts, PathFamily, Step};
pub use render::render_svg;
pub use transforms::{
    arrow_at, bottom_structure, find_openings, reduce, reverse_arrow, Arrow, BottomStructure,
    Opening, Reduction,
};
