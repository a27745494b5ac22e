use serde::{Deserialize, Serialize};

use crate::error::{JayaError, Result};

/// Per-variable search box. `lower[i] == upper[i]` pins variable `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Bounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() {
            return Err(JayaError::InvalidBounds("at least one variable required".into()));
        }
        if lower.len() != upper.len() {
            return Err(JayaError::InvalidBounds(format!(
                "lower has {} entries but upper has {}",
                lower.len(),
                upper.len()
            )));
        }
        for (i, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !lo.is_finite() || !hi.is_finite() {
                return Err(JayaError::InvalidBounds(format!(
                    "variable {} has a non-finite limit",
                    i + 1
                )));
            }
            if lo > hi {
                return Err(JayaError::InvalidBounds(format!(
                    "variable {}: lower {lo} exceeds upper {hi}",
                    i + 1
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    /// Same interval `[lo, hi]` on every one of `n_var` variables.
    pub fn uniform(n_var: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![lo; n_var], vec![hi; n_var])
    }

    pub fn n_var(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.n_var()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (lo, hi))| lo <= v && v <= hi)
    }

    pub fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n_var() {
            return Err(JayaError::Dimension {
                expected: self.n_var(),
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Projects each coordinate onto its interval, in place.
    pub fn clamp_in_place(&self, x: &mut [f64]) {
        for (v, (lo, hi)) in x.iter_mut().zip(self.lower.iter().zip(&self.upper)) {
            *v = v.clamp(*lo, *hi);
        }
    }
}

/// Projects `x` onto the box.
pub fn clamp(x: &[f64], bounds: &Bounds) -> Vec<f64> {
    let mut out = x.to_vec();
    bounds.clamp_in_place(&mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clamp_upper() {
        let b = Bounds::uniform(1, -5.0, 5.0).unwrap();
        assert_eq!(clamp(&[7.0], &b), vec![5.0]);
    }

    #[test]
    fn clamp_lower_and_pass_through() {
        let b = Bounds::uniform(2, -5.0, 5.0).unwrap();
        assert_eq!(clamp(&[-9.0, 0.0], &b), vec![-5.0, 0.0]);
    }

    #[test]
    fn clamp_identity_inside() {
        let b = Bounds::uniform(3, -5.0, 5.0).unwrap();
        assert_eq!(clamp(&[1.0, 2.0, 3.0], &b), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn rejects_malformed() {
        assert!(matches!(Bounds::new(vec![], vec![]), Err(JayaError::InvalidBounds(_))));
        assert!(matches!(
            Bounds::new(vec![0.0], vec![1.0, 2.0]),
            Err(JayaError::InvalidBounds(_))
        ));
        assert!(matches!(
            Bounds::new(vec![1.0], vec![0.0]),
            Err(JayaError::InvalidBounds(_))
        ));
        assert!(matches!(
            Bounds::new(vec![f64::NAN], vec![0.0]),
            Err(JayaError::InvalidBounds(_))
        ));
        assert!(Bounds::new(vec![2.0], vec![2.0]).is_ok());
    }
}
