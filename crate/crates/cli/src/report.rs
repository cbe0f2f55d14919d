//! JSON report types.

use serde::{Serialize, Serializer};

use orbitscope::orbit_matrix::{min_orbit_bound, OrbitAnalysis};

use crate::CliError;

/// An `f64` serialized with 17 significant digits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sig17(pub f64);

impl Serialize for Sig17 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let text = format!("{:.16e}", self.0);
        let number: serde_json::Number = text.parse().map_err(serde::ser::Error::custom)?;
        number.serialize(s)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IsotropyEntry {
    /// `(t, r, s)` per qubit, qubit 1 first.
    pub coordinates: Vec<[Sig17; 3]>,
    pub theta: Sig17,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub state: String,
    pub n: usize,
    pub orbit_dimension: usize,
    pub rank: usize,
    pub matrix_shape: [usize; 2],
    pub min_bound: usize,
    pub achieves_min: bool,
    pub isotropy_dimension: usize,
    pub isotropy_basis: Vec<IsotropyEntry>,
    pub rank_path: &'static str,
    pub tolerance: Sig17,
}

impl AnalysisReport {
    pub fn new(state: String, a: &OrbitAnalysis) -> Result<Self, CliError> {
        let min_bound = min_orbit_bound(a.n)?;
        let report = AnalysisReport {
            state,
            n: a.n,
            orbit_dimension: a.orbit_dimension(),
            rank: a.rank,
            matrix_shape: [1 << (a.n + 1), 3 * a.n + 1],
            min_bound,
            achieves_min: a.orbit_dimension() == min_bound,
            isotropy_dimension: a.isotropy_dimension(),
            isotropy_basis: a
                .isotropy
                .iter()
                .map(|e| IsotropyEntry {
                    coordinates: e.x.coords.iter().map(|c| c.to_array().map(Sig17)).collect(),
                    theta: Sig17(e.theta),
                })
                .collect(),
            rank_path: a.path.as_str(),
            tolerance: Sig17(a.tolerance),
        };
        report.check()?;
        Ok(report)
    }

    /// Re-asserts the dimension identities carried by the report.
    pub fn check(&self) -> Result<(), CliError> {
        let cols = self.matrix_shape[1];
        let ok = self.orbit_dimension + 1 == self.rank
            && self.isotropy_dimension + self.rank == cols
            && self.isotropy_basis.len() == self.isotropy_dimension
            && self.orbit_dimension >= self.min_bound
            && self.achieves_min == (self.orbit_dimension == self.min_bound);
        if ok {
            Ok(())
        } else {
            Err(CliError::Verification(format!(
                "inconsistent report: rank {}, orbit dimension {}, isotropy dimension {}, \
                 {} columns, bound {}",
                self.rank, self.orbit_dimension, self.isotropy_dimension, cols, self.min_bound
            )))
        }
    }
}

/// One line of `sweep` output.
#[derive(Debug, Clone, Serialize)]
pub struct SweepSample {
    pub sample: u64,
    pub seed: u64,
    pub n: usize,
    pub rank: usize,
    pub orbit_dimension: usize,
    pub isotropy_dimension: usize,
    pub achieves_min: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepAggregate {
    pub samples: u64,
    pub n: usize,
    pub min_bound: usize,
    pub min: usize,
    pub max: usize,
    /// Orbit dimension to count.
    pub histogram: std::collections::BTreeMap<usize, u64>,
    pub violations: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseResult {
    pub case: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub suite: &'static str,
    pub n_max: usize,
    pub passed: bool,
    pub cases: Vec<CaseResult>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig17_prints_seventeen_digits() {
        let text = serde_json::to_string(&Sig17(0.1)).unwrap();
        assert_eq!(text, "1.0000000000000001e-1");
        let back: f64 = serde_json::from_str(&text).unwrap();
        assert_eq!(back, 0.1);
        assert_eq!(serde_json::to_string(&Sig17(-2.0)).unwrap(), "-2.0000000000000000e+0");
        assert_eq!(serde_json::to_string(&Sig17(f64::NAN)).unwrap(), "null");
    }

    #[test]
    fn sig17_round_trips_arbitrary_values() {
        for x in [1e-300, std::f64::consts::PI, -123456.789, 5e-324, f64::MAX] {
            let text = serde_json::to_string(&Sig17(x)).unwrap();
            assert_eq!(serde_json::from_str::<f64>(&text).unwrap(), x, "{text}");
        }
    }
}
