//! Standard example groups used throughout the tests, the CLI and the demo.

use num_complex::Complex64 as C64;

use crate::jet::{JetDiffeo, JetVectorField, MultiIndex};
use crate::linalg::{from_real_rows, CMatrix};

/// Rotations of `R^3` about the x and z axes by `arccos(3/5)`; they
/// generate a free group of rank two.
pub fn free_rotation_matrices() -> (CMatrix, CMatrix) {
    let (c, s) = (0.6, 0.8);
    let rx = from_real_rows(&[&[1.0, 0.0, 0.0], &[0.0, c, -s], &[0.0, s, c]]);
    let rz = from_real_rows(&[&[c, -s, 0.0], &[s, c, 0.0], &[0.0, 0.0, 1.0]]);
    (rx, rz)
}

pub fn free_rotation_pair(degree: usize) -> Vec<(String, JetDiffeo)> {
    let (a, b) = free_rotation_matrices();
    vec![
        ("a".into(), JetDiffeo::from_linear(&a, degree).expect("rotation")),
        ("b".into(), JetDiffeo::from_linear(&b, degree).expect("rotation")),
    ]
}

/// `I + E_12`, `I + E_23`, `I + E_13`: generators of the integer
/// Heisenberg group, nilpotent of class two.
pub fn heisenberg_matrices() -> [CMatrix; 3] {
    [
        from_real_rows(&[&[1.0, 1.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]),
        from_real_rows(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 1.0], &[0.0, 0.0, 1.0]]),
        from_real_rows(&[&[1.0, 0.0, 1.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]),
    ]
}

pub fn heisenberg_triple(degree: usize) -> Vec<(String, JetDiffeo)> {
    ["x", "y", "z"]
        .iter()
        .zip(heisenberg_matrices())
        .map(|(n, m)| (n.to_string(), JetDiffeo::from_linear(&m, degree).expect("unipotent")))
        .collect()
}

/// The shears `[[1,1],[0,1]]` and `[[1,0],[1,1]]`.
pub fn shear_pair() -> (CMatrix, CMatrix) {
    (
        from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]),
        from_real_rows(&[&[1.0, 0.0], &[1.0, 1.0]]),
    )
}

/// Time-one flow of `x^k d/dx` on `(C, 0)` at the given degree.
pub fn monomial_flow(k: u32, degree: usize) -> JetDiffeo {
    JetVectorField::from_terms(
        1,
        degree,
        &[vec![(MultiIndex::new(vec![k]), C64::new(1.0, 0.0))]],
    )
    .expect("valid field")
    .exp()
    .expect("zero linear part")
}

/// Planar rotation by `theta` as a real 2x2 matrix.
pub fn rotation2(theta: f64) -> CMatrix {
    let (s, c) = theta.sin_cos();
    from_real_rows(&[&[c, -s], &[s, c]])
}
