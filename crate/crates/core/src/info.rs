//! Exact entropies (in bits) of finite pmfs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::source::{induced_z_pmf, FunctionSpec, JointSource};

/// `-sum p log2 p`, with `0 log 0 = 0`.
pub fn entropy(p: &[f64]) -> f64 {
    let mut h = 0.0;
    for &pi in p {
        if pi > 0.0 {
            h -= pi * pi.log2();
        }
    }
    h
}

/// A two-dimensional pmf table over `U x V`, row-major with `U` indexing rows.
#[derive(Debug, Clone, PartialEq)]
pub struct JointTable {
    pub rows: usize,
    pub cols: usize,
    pub probs: Vec<f64>,
}

impl JointTable {
    pub fn new(rows: usize, cols: usize, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} table needs {} entries, found {}",
                rows * cols,
                probs.len()
            )));
        }
        Ok(JointTable { rows, cols, probs })
    }

    pub fn row_marginal(&self) -> Vec<f64> {
        self.probs.chunks(self.cols).map(|r| r.iter().sum()).collect()
    }

    pub fn col_marginal(&self) -> Vec<f64> {
        let mut m = vec![0.0; self.cols];
        for row in self.probs.chunks(self.cols) {
            for (acc, &p) in m.iter_mut().zip(row) {
                *acc += p;
            }
        }
        m
    }
}

/// `H(U | V) = H(U, V) - H(V)` for a table with `U` on rows and `V` on columns.
pub fn conditional_entropy(joint: &JointTable) -> f64 {
    (entropy(&joint.probs) - entropy(&joint.col_marginal())).max(0.0)
}

/// Every entropy that appears in the function region and the Slepian-Wolf region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    pub h_x: f64,
    pub h_y: f64,
    pub h_xy: f64,
    pub h_x_given_y: f64,
    pub h_y_given_x: f64,
    pub h_z: f64,
    pub h_z_given_x: f64,
    pub h_z_given_y: f64,
}

/// Computes the [`EntropyReport`] for `Z = F(X, Y)`.
///
/// All conditional terms are differences against the same marginal entropy
/// (`H(X)` or `H(Y)`), so for the identity function the function-side and
/// Slepian-Wolf-side values come out of identical arithmetic.
pub fn full_report(src: &JointSource, f: &FunctionSpec) -> Result<EntropyReport> {
    let pz = induced_z_pmf(src, f)?;
    let (px, py) = src.marginals();
    let (xs, ys, zs) = (src.x_size(), src.y_size(), f.z_size());

    let mut zx = vec![0.0; zs * xs];
    let mut zy = vec![0.0; zs * ys];
    for x in 0..xs {
        for y in 0..ys {
            let (z, p) = (f.eval(x, y), src.p(x, y));
            zx[z * xs + x] += p;
            zy[z * ys + y] += p;
        }
    }

    let h_x = entropy(&px);
    let h_y = entropy(&py);
    let h_xy = entropy(src.pmf());
    Ok(EntropyReport {
        h_x,
        h_y,
        h_xy,
        h_x_given_y: (h_xy - h_y).max(0.0),
        h_y_given_x: (h_xy - h_x).max(0.0),
        h_z: entropy(&pz),
        h_z_given_x: (entropy(&zx) - h_x).max(0.0),
        h_z_given_y: (entropy(&zy) - h_y).max(0.0),
    })
}

/// Binary entropy function.
pub fn h2(p: f64) -> f64 {
    entropy(&[p, 1.0 - p])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    /// `sum_v p(v) H(U | V = v)`, evaluated column by column.
    fn conditional_entropy_by_columns(t: &JointTable) -> f64 {
        (0..t.cols)
            .map(|v| {
                let column: Vec<f64> = (0..t.rows).map(|u| t.probs[u * t.cols + v]).collect();
                let pv: f64 = column.iter().sum();
                if pv == 0.0 {
                    0.0
                } else {
                    let cond: Vec<f64> = column.iter().map(|p| p / pv).collect();
                    pv * entropy(&cond)
                }
            })
            .sum()
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy(&[0.5, 0.5]), 1.0);
        assert_eq!(entropy(&[1.0, 0.0]), 0.0);
        // 0.5*1 + 0.25*2 + 0.25*2
        assert_abs_diff_eq!(entropy(&[0.5, 0.25, 0.25]), 1.5, epsilon = 1e-15);
    }

    #[test]
    fn conditional_entropy_examples() {
        // independent: U ~ [0.25, 0.75], V ~ [0.5, 0.5]
        let t = JointTable::new(2, 2, vec![0.125, 0.125, 0.375, 0.375]).unwrap();
        assert_abs_diff_eq!(conditional_entropy(&t), entropy(&[0.25, 0.75]), epsilon = 1e-12);
        // U = V
        let t = JointTable::new(3, 3, vec![0.2, 0.0, 0.0, 0.0, 0.3, 0.0, 0.0, 0.0, 0.5]).unwrap();
        assert_abs_diff_eq!(conditional_entropy(&t), 0.0, epsilon = 1e-12);
        // (Z, Y) for the mod-2 adder on DSBS(0.25): Z independent of Y, Z ~ Bern(0.25)
        let zy = JointTable::new(2, 2, vec![0.375, 0.375, 0.125, 0.125]).unwrap();
        assert_abs_diff_eq!(conditional_entropy(&zy), 0.811_278_124_459_132_8, epsilon = 1e-12);
        assert_abs_diff_eq!(conditional_entropy_by_columns(&zy), 0.811_278_124_459_132_8, epsilon = 1e-12);
    }

    #[test]
    fn report_constant_and_identity() {
        let src = JointSource::new(2, 3, vec![0.1, 0.2, 0.05, 0.3, 0.15, 0.2]).unwrap();
        let r = full_report(&src, &FunctionSpec::constant(2, 3, 1, 0).unwrap()).unwrap();
        assert_eq!((r.h_z, r.h_z_given_x, r.h_z_given_y), (0.0, 0.0, 0.0));

        let r = full_report(&src, &FunctionSpec::identity(2, 3)).unwrap();
        assert_eq!(r.h_z.to_bits(), r.h_xy.to_bits());
        assert_eq!(r.h_z_given_y.to_bits(), r.h_x_given_y.to_bits());
        assert_eq!(r.h_z_given_x.to_bits(), r.h_y_given_x.to_bits());
    }

    #[test]
    fn report_mod2_dsbs() {
        let r = full_report(&JointSource::dsbs(0.25).unwrap(), &FunctionSpec::modular_sum(2)).unwrap();
        let h = h2(0.25);
        assert_abs_diff_eq!(h, 0.811_278_124_459_132_8, epsilon = 1e-15);
        for v in [r.h_z, r.h_z_given_x, r.h_z_given_y] {
            assert_abs_diff_eq!(v, h, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(r.h_xy, 1.0 + h, epsilon = 1e-12);
    }

    #[test]
    fn dimension_mismatch() {
        let src = JointSource::uniform(2, 2).unwrap();
        assert!(full_report(&src, &FunctionSpec::identity(2, 3)).is_err());
        assert!(JointTable::new(2, 2, vec![1.0]).is_err());
    }

    proptest::proptest! {
        #[test]
        fn difference_form_matches_column_form(
            rows in 1usize..5, cols in 1usize..5,
            weights in proptest::collection::vec(0.0f64..1.0, 16),
        ) {
            let mut probs: Vec<f64> = weights[..rows * cols].to_vec();
            probs[0] += 1e-3;
            let total: f64 = probs.iter().sum();
            probs.iter_mut().for_each(|p| *p /= total);
            let t = JointTable::new(rows, cols, probs).unwrap();
            let h = conditional_entropy(&t);
            proptest::prop_assert!((h - conditional_entropy_by_columns(&t)).abs() < 1e-9);
            proptest::prop_assert!(h <= entropy(&t.row_marginal()) + 1e-9);
            proptest::prop_assert!((h + entropy(&t.col_marginal()) - entropy(&t.probs)).abs() < 1e-9);
        }
    }
}
