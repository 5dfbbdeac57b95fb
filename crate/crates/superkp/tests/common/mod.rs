#![allow(dead_code)]

use superkp::matrix::LambdaMatrix;
use superkp::GrassmannScalar;

/// Laplace expansion along the first row; entries must commute.
pub fn laplace_det(m: &LambdaMatrix) -> GrassmannScalar {
    let n = m.n_generators();
    let size = m.nrows();
    if size == 0 {
        return GrassmannScalar::one(n);
    }
    let mut acc = GrassmannScalar::zero(n);
    for j in 0..size {
        let rows: Vec<usize> = (1..size).collect();
        let cols: Vec<usize> = (0..size).filter(|&c| c != j).collect();
        let term = m.get(0, j) * &laplace_det(&m.select(&rows, &cols));
        if j % 2 == 0 {
            acc += &term;
        } else {
            acc -= &term;
        }
    }
    acc
}

pub fn max_diff(a: &[GrassmannScalar], b: &[GrassmannScalar]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.max_abs_diff(y)).fold(0.0, f64::max)
}
