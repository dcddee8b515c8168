//! Instances on which the robustness bounds are (asymptotically) tight.

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::prophet::Instance;

/// A point mass at `N - 1 - eps` followed by `N - 1` boxes paying `s` with probability `1/s`.
pub fn make_general_tightness_instance(n: usize, eps: f64, s: f64) -> Result<Instance> {
    if n < 3 || !(eps > 0.0 && eps < 1.0) || !(s > n as f64) {
        return Err(Error::InvalidParameter(format!(
            "general tightness instance needs N >= 3, 0 < eps < 1, s > N (got N={n}, eps={eps}, s={s})"
        )));
    }
    let d = n as f64 - 1.0 - eps;
    let mut boxes = vec![Dist::point_mass(d)?];
    let lottery = Dist::discrete(&[(0.0, 1.0 - 1.0 / s), (s, 1.0 / s)])?;
    boxes.extend(std::iter::repeat_n(lottery, n - 1));
    Instance::new(boxes)
}

/// `N` IID boxes on `{N - a1, N + a2}` with mean exactly `N`.
pub fn make_iid_tightness_instance(n: usize, a1: f64, a2: f64) -> Result<Instance> {
    if n < 1 || !(a1 > 0.0 && a1 < 1.0) || !(a2 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "IID tightness instance needs 0 < a1 < 1 and a2 > 0 (got a1={a1}, a2={a2})"
        )));
    }
    let nf = n as f64;
    let low_mass = a2 / (a1 + a2);
    let d = Dist::discrete(&[(nf - a1, low_mass), (nf + a2, 1.0 - low_mass)])?;
    Instance::iid(&d, n)
}

/// `n^2` IID boxes paying `n/(e-2)` w.p. `n^-3`, `1` w.p. `n^-1`, and `0` otherwise.
pub fn make_percentage_instance(n: usize) -> Result<Instance> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "percentage instance needs n >= 2 (got {n})"
        )));
    }
    let nf = n as f64;
    let e = std::f64::consts::E;
    let top = nf.powi(-3);
    let one = 1.0 / nf;
    let d = Dist::discrete(&[(0.0, 1.0 - top - one), (1.0, one), (nf / (e - 2.0), top)])?;
    Instance::iid(&d, n * n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn means() {
        let g = make_general_tightness_instance(3, 0.5, 10.0).unwrap();
        assert_eq!(g.means()[0], 1.5);
        assert!((g.means()[1] - 1.0).abs() < 1e-15);
        let iid = make_iid_tightness_instance(7, 0.5, 3.0).unwrap();
        assert!(iid.means().iter().all(|m| (m - 7.0).abs() < 1e-12));
        assert!(make_general_tightness_instance(2, 0.5, 10.0).is_err());
        assert!(make_iid_tightness_instance(3, 1.5, 1.0).is_err());
        assert_eq!(make_percentage_instance(3).unwrap().len(), 9);
    }
}
