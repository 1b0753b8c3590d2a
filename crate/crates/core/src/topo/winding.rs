use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{Mat, C64};

/// Winding number of a closed loop of nonzero complex samples. The loop is
/// closed implicitly from the last sample back to the first; a repeated
/// endpoint contributes a zero increment.
pub fn winding_number(samples: &[C64]) -> Result<i64> {
    if samples.len() < 4 {
        return Err(Error::Refinement {
            index: samples.len(),
            jump: PI,
        });
    }
    let scale = samples.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if let Some(index) = samples
        .iter()
        .position(|z| z.norm() <= 1e-12 * scale.max(f64::MIN_POSITIVE))
    {
        return Err(Error::SingularLoop { index });
    }
    let n = samples.len();
    let mut total = 0.0;
    for k in 0..n {
        let jump = (samples[(k + 1) % n] / samples[k]).arg();
        if jump.abs() >= PI - 1e-12 {
            return Err(Error::Refinement { index: k, jump });
        }
        total += jump;
    }
    Ok((total / (2.0 * PI)).round() as i64)
}

/// Winding number of `det` along a closed loop of invertible matrices.
pub fn det_winding(samples: &[Mat]) -> Result<i64> {
    let dets: Vec<C64> = samples.iter().map(|m| m.clone().determinant()).collect();
    winding_number(&dets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, identity, I};

    fn arc(from: C64, to: C64, steps: usize) -> Vec<C64> {
        // Straight chord; short enough that no step exceeds a quarter turn.
        (0..steps)
            .map(|k| from + (to - from) * (k as f64 / steps as f64))
            .collect()
    }

    #[test]
    fn examples() {
        assert_eq!(winding_number(&[c(1.0, 0.0); 4]).unwrap(), 0);
        let corners = [c(-1.0, 0.0), I, c(1.0, 0.0), -I, c(-1.0, 0.0)];
        let lp: Vec<C64> = corners
            .windows(2)
            .flat_map(|w| arc(w[0], w[1], 4))
            .collect();
        assert_eq!(winding_number(&lp).unwrap(), -1);
        let k3: Vec<C64> = (0..64)
            .map(|j| (I * (2.0 * PI * 3.0 * j as f64 / 64.0)).exp())
            .collect();
        assert_eq!(winding_number(&k3).unwrap(), 3);
    }

    #[test]
    fn errors() {
        let zero = [c(1.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0), c(0.5, 0.0)];
        assert!(matches!(
            winding_number(&zero),
            Err(Error::SingularLoop { index: 1 })
        ));
        let coarse: Vec<C64> = (0..4)
            .map(|j| (I * (2.0 * PI * 2.0 * j as f64 / 4.0)).exp())
            .collect();
        assert!(matches!(
            winding_number(&coarse),
            Err(Error::Refinement { .. })
        ));
    }

    #[test]
    fn det_examples() {
        assert_eq!(det_winding(&vec![identity(3); 8]).unwrap(), 0);
        let lp: Vec<Mat> = (0..32)
            .map(|j| {
                let mut m = identity(2);
                m[(0, 0)] = (I * (2.0 * PI * j as f64 / 32.0)).exp();
                m
            })
            .collect();
        assert_eq!(det_winding(&lp).unwrap(), 1);
    }
}
