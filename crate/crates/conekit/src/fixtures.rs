//! Bundled fixture models. The JSON files under `fixtures/` are the single
//! source of truth; these helpers parse the embedded copies.

use crate::model::LinkageModel;
use crate::modelfile::ModelFile;

pub const FAYET_WOHLHART_JSON: &str = include_str!("../fixtures/fayet_wohlhart.json");
pub const FOURBAR_PLANAR_JSON: &str = include_str!("../fixtures/fourbar_planar.json");
pub const TRIANGLE_3R_JSON: &str = include_str!("../fixtures/triangle_3r.json");

fn build(text: &str) -> LinkageModel {
    ModelFile::from_str(text)
        .expect("bundled fixture parses")
        .to_model()
        .expect("bundled fixture validates")
}

/// The three-loop spatial linkage: 20 helical joints, 18 links with ground,
/// three fundamental cycles, rank-15 Jacobian at the reference configuration.
pub fn fayet_wohlhart() -> LinkageModel {
    build(FAYET_WOHLHART_JSON)
}

/// Unit-square planar 4R (parallelogram): one loop, 1-dimensional finite motion.
pub fn fourbar_planar() -> LinkageModel {
    build(FOURBAR_PLANAR_JSON)
}

/// Rigid 3R triangle: full-column-rank Jacobian, no motion.
pub fn triangle_3r() -> LinkageModel {
    build(TRIANGLE_3R_JSON)
}
