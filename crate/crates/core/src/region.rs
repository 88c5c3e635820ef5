//! Rate regions bounded by two individual-rate half-planes and a sum-rate half-plane.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::info::EntropyReport;

/// Default membership tolerance, in bits.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// The closed region `{R1 >= r1_min, R2 >= r2_min, R1 + R2 >= rsum_min}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateRegion {
    pub r1_min: f64,
    pub r2_min: f64,
    pub rsum_min: f64,
}

/// Which region to read off an [`EntropyReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionKind {
    /// Thresholds `H(Z|Y), H(Z|X), H(Z)`.
    Function,
    /// Thresholds `H(X|Y), H(Y|X), H(X,Y)`.
    SlepianWolf,
}

pub fn region_of(report: &EntropyReport, which: RegionKind) -> RateRegion {
    match which {
        RegionKind::Function => RateRegion {
            r1_min: report.h_z_given_y,
            r2_min: report.h_z_given_x,
            rsum_min: report.h_z,
        },
        RegionKind::SlepianWolf => RateRegion {
            r1_min: report.h_x_given_y,
            r2_min: report.h_y_given_x,
            rsum_min: report.h_xy,
        },
    }
}

impl RateRegion {
    pub fn new(r1_min: f64, r2_min: f64, rsum_min: f64) -> Result<Self> {
        if [r1_min, r2_min, rsum_min].iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
            return Err(Error::InvalidParameter(format!(
                "region thresholds must be finite and non-negative: ({r1_min}, {r2_min}, {rsum_min})"
            )));
        }
        Ok(RateRegion { r1_min, r2_min, rsum_min })
    }

    /// Closed-region membership with slack `tol` on every constraint.
    pub fn contains(&self, r1: f64, r2: f64, tol: f64) -> Result<bool> {
        if r1 < 0.0 || r2 < 0.0 || r1.is_nan() || r2.is_nan() {
            return Err(Error::InvalidParameter(format!("rates must be non-negative: ({r1}, {r2})")));
        }
        if tol.is_nan() || tol < 0.0 {
            return Err(Error::InvalidParameter(format!("tolerance must be non-negative: {tol}")));
        }
        Ok(r1 >= self.r1_min - tol && r2 >= self.r2_min - tol && r1 + r2 >= self.rsum_min - tol)
    }

    /// True when the sum-rate constraint cuts off the corner `(r1_min, r2_min)`.
    pub fn sum_constraint_active(&self) -> bool {
        self.r1_min + self.r2_min < self.rsum_min
    }

    /// Vertices of the dominant boundary in increasing `r1` order.
    pub fn corner_points(&self) -> Vec<(f64, f64)> {
        if self.sum_constraint_active() {
            vec![
                (self.r1_min, self.rsum_min - self.r1_min),
                (self.rsum_min - self.r2_min, self.r2_min),
            ]
        } else {
            vec![(self.r1_min, self.r2_min)]
        }
    }

    /// Samples the dominant boundary for plotting.
    ///
    /// The polyline runs down the vertical ray `r1 = r1_min` from `span` bits
    /// above the first corner, along the sum-rate face, and out the horizontal
    /// ray `r2 = r2_min` to `span` bits right of the last corner. Each of the
    /// three pieces gets `resolution` evenly spaced points; shared corners are
    /// emitted once.
    pub fn boundary(&self, resolution: usize, span: f64) -> Result<Vec<(f64, f64)>> {
        if resolution < 2 {
            return Err(Error::InvalidParameter("boundary resolution must be at least 2".into()));
        }
        let corners = self.corner_points();
        let first = corners[0];
        let last = corners[corners.len() - 1];
        let pieces = [
            ((first.0, first.1 + span), first),
            (first, last),
            (last, (last.0 + span, last.1)),
        ];
        let mut points: Vec<(f64, f64)> = Vec::with_capacity(3 * resolution);
        for (a, b) in pieces {
            for i in 0..resolution {
                let t = i as f64 / (resolution - 1) as f64;
                let p = if i == resolution - 1 { b } else { (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1)) };
                if points.last() != Some(&p) {
                    points.push(p);
                }
            }
        }
        Ok(points)
    }

    /// Writes [`RateRegion::boundary`] as `r1,r2` CSV rows with a header.
    pub fn write_boundary_csv<W: Write>(&self, out: W, resolution: usize, span: f64) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["r1", "r2"])?;
        for (r1, r2) in self.boundary(resolution, span)? {
            w.serialize((r1, r2))?;
        }
        w.flush().map_err(|e| Error::io("<boundary csv>", e))?;
        Ok(())
    }
}

/// Free-function form of [`RateRegion::contains`].
pub fn contains(region: &RateRegion, r1: f64, r2: f64, tol: f64) -> Result<bool> {
    region.contains(r1, r2, tol)
}

/// `outer ⊆ inner`, decided by comparing thresholds componentwise.
pub fn containment(inner: &RateRegion, outer: &RateRegion) -> bool {
    inner.r1_min <= outer.r1_min && inner.r2_min <= outer.r2_min && inner.rsum_min <= outer.rsum_min
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::info::{full_report, h2};
    use crate::source::{FunctionSpec, JointSource};
    use approx::assert_abs_diff_eq;

    fn mod2_region() -> RateRegion {
        let r = full_report(&JointSource::dsbs(0.25).unwrap(), &FunctionSpec::modular_sum(2)).unwrap();
        region_of(&r, RegionKind::Function)
    }

    #[test]
    fn identity_regions_coincide() {
        let src = JointSource::new(2, 2, vec![0.4, 0.1, 0.2, 0.3]).unwrap();
        let r = full_report(&src, &FunctionSpec::identity(2, 2)).unwrap();
        assert_eq!(region_of(&r, RegionKind::Function), region_of(&r, RegionKind::SlepianWolf));
    }

    #[test]
    fn constant_region_is_quadrant() {
        let src = JointSource::dsbs(0.1).unwrap();
        let r = full_report(&src, &FunctionSpec::constant(2, 2, 1, 0).unwrap()).unwrap();
        let region = region_of(&r, RegionKind::Function);
        assert_eq!(region, RateRegion { r1_min: 0.0, r2_min: 0.0, rsum_min: 0.0 });
        assert!(region.contains(0.0, 0.0, 0.0).unwrap());
    }

    #[test]
    fn mod2_thresholds_and_membership() {
        let region = mod2_region();
        for t in [region.r1_min, region.r2_min, region.rsum_min] {
            assert_abs_diff_eq!(t, h2(0.25), epsilon = 1e-9);
        }
        assert!(!region.sum_constraint_active());
        assert!(!region.contains(0.5, 0.9, DEFAULT_TOLERANCE).unwrap());
        assert!(region.contains(region.r1_min, region.r2_min, DEFAULT_TOLERANCE).unwrap());
        assert!(region.contains(-1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn corner_examples() {
        assert_eq!(RateRegion::new(0.0, 0.0, 0.0).unwrap().corner_points(), [(0.0, 0.0)]);
        assert_eq!(RateRegion::new(0.811, 0.811, 0.811).unwrap().corner_points(), [(0.811, 0.811)]);
        let sw = region_of(
            &full_report(&JointSource::dsbs(0.25).unwrap(), &FunctionSpec::identity(2, 2)).unwrap(),
            RegionKind::SlepianWolf,
        );
        let c = sw.corner_points();
        assert_eq!(c.len(), 2);
        assert_abs_diff_eq!(c[0].0, h2(0.25), epsilon = 1e-12);
        assert_abs_diff_eq!(c[0].1, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c[1].0, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c[1].1, h2(0.25), epsilon = 1e-12);
    }

    #[test]
    fn containment_examples() {
        let a = mod2_region();
        assert!(containment(&a, &a));
        let inner = RateRegion::new(1.0, 0.0, 1.0).unwrap();
        let outer = RateRegion::new(0.0, 0.0, 0.0).unwrap();
        assert!(!containment(&inner, &outer));
        assert!(containment(&outer, &inner));
    }

    #[test]
    fn boundary_hits_corners() {
        let region = RateRegion::new(0.3, 0.2, 1.0).unwrap();
        let pts = region.boundary(5, 1.0).unwrap();
        assert_eq!(pts.len(), 13);
        for c in region.corner_points() {
            assert!(pts.contains(&c));
        }
        for &(r1, r2) in &pts {
            assert!(region.contains(r1, r2, 1e-12).unwrap());
        }
        let mut buf = Vec::new();
        region.write_boundary_csv(&mut buf, 2, 0.5).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("r1,r2\n"));
        assert!(region.boundary(1, 1.0).is_err());
    }

    proptest::proptest! {
        #[test]
        fn membership_monotone(
            t in proptest::array::uniform3(0.0f64..2.0),
            r in proptest::array::uniform2(0.0f64..3.0),
            d in 0.0f64..1.0,
        ) {
            let region = RateRegion::new(t[0], t[1], t[2]).unwrap();
            if region.contains(r[0], r[1], 1e-9).unwrap() {
                proptest::prop_assert!(region.contains(r[0] + d, r[1] + d, 1e-9).unwrap());
            }
        }

        #[test]
        fn corners_are_tight(t in proptest::array::uniform3(0.0f64..2.0)) {
            let region = RateRegion::new(t[0], t[1], t[2]).unwrap();
            for (r1, r2) in region.corner_points() {
                proptest::prop_assert!(region.contains(r1, r2, 1e-12).unwrap());
                // stepping below the boundary in either coordinate leaves the region
                let out1 = r1 < 1e-6 || !region.contains(r1 - 1e-6, r2, 0.0).unwrap();
                let out2 = r2 < 1e-6 || !region.contains(r1, r2 - 1e-6, 0.0).unwrap();
                proptest::prop_assert!(out1 && out2);
            }
        }
    }
}
