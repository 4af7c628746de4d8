//! The canonical ideal by evaluation: quadric generators, first syzygies and
//! sections of the twisted normal bundle.

mod betti;
mod normal;
mod presentation;
mod syzygy;

pub use normal::{
    normal_sections, normal_sections_with_columns, satisfies_k1, trivial_normal_fields, NormalSectionSpace,
};
pub use presentation::{
    canonical_coords, first_syzygies, presentation_points, quadric_generators, CanonicalCoords, CanonicalPresentation,
    QuarticSyzygies,
};
