//! Characteristic functions of the open, target, and closed loops.

use num_complex::Complex64;

use super::{FilteredController, IdeModel, SampledKernel};
use crate::linalg::{ceye, det, CMat};
use crate::{Error, Result};

/// W(λ) = ∫ kernel(θ) e^{λθ} dθ.
pub fn kernel_transform(kernel: &SampledKernel, lambda: Complex64) -> CMat {
    kernel.transform(lambda)
}

/// det(−I + Σᵢⱼ H_ij e^{−λ(rᵢ+sⱼ)} + W₁(λ)), zero exactly at the
/// characteristic roots of the uncontrolled plant.
pub fn char_open(model: &IdeModel, lambda: Complex64) -> Complex64 {
    let mut m = model.difference_transform(lambda) - ceye(model.ell());
    m += model.w1().transform(lambda);
    det(&m)
}

fn check_dims(model: &IdeModel, controller: &FilteredController) -> Result<()> {
    if controller.ell() != model.ell() {
        return Err(Error::Dimension(format!(
            "controller block order {} does not match model order {}",
            controller.ell(),
            model.ell()
        )));
    }
    Ok(())
}

/// Characteristic function det(−I + W₁(λ) − W₂(λ)) of the target dynamics
/// x(t) = ∫ (w₁ − w₂)(θ) x(t+θ) dθ.
pub fn char_target(
    model: &IdeModel,
    controller: &FilteredController,
    lambda: Complex64,
) -> Result<Complex64> {
    check_dims(model, controller)?;
    let mut m = model.w1().transform(lambda) - ceye(model.ell());
    m -= controller.implemented_kernel().transform(lambda);
    Ok(det(&m))
}

/// Closed-loop characteristic function, in the denominator-cleared form
///
/// det[(1 + λT)(−I + A(λ) + W₁(λ)) − (Â(λ) + Ŵ₂(λ))],
///
/// where A, Â are the discrete-delay transforms of the plant and of the
/// assumed data in the control law. This is (1+λT)^ℓ · det Δ(λ; T), entire
/// in λ, so λ = −1/T needs no special treatment. A controller with
/// `T = +∞` annihilates the control terms and reduces to [`char_open`].
pub fn char_closed(
    model: &IdeModel,
    controller: &FilteredController,
    lambda: Complex64,
) -> Result<Complex64> {
    check_dims(model, controller)?;
    let open = {
        let mut m = model.difference_transform(lambda) - ceye(model.ell());
        m += model.w1().transform(lambda);
        m
    };
    let t = controller.t_filter();
    if t.is_infinite() {
        return Ok(det(&open));
    }
    let mut ctrl_part = controller.difference_transform(lambda);
    ctrl_part += controller.implemented_kernel().transform(lambda);
    let m = open * (Complex64::new(1.0, 0.0) + lambda * t) - ctrl_part;
    Ok(det(&m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c64, RMat};
    use rand::{Rng, SeedableRng};

    fn scalar(v: f64) -> RMat {
        RMat::from_element(1, 1, v)
    }

    fn zero_kernel_model(ell: usize, h: Vec<RMat>, r: Vec<f64>, s: Vec<f64>) -> IdeModel {
        let tau = r[0] + s[0];
        IdeModel::new(h, r, s, SampledKernel::zero(-tau, 0.0, ell).unwrap()).unwrap()
    }

    #[test]
    fn char_open_all_zero_is_sign_of_ell() {
        let m = zero_kernel_model(
            2,
            vec![RMat::zeros(2, 2); 2],
            vec![1.0],
            vec![0.7, 0.4],
        );
        for &lam in &[c64(0.0, 0.0), c64(1.0, 3.0), c64(-2.0, -5.0)] {
            let v = char_open(&m, lam);
            assert!((v - c64(1.0, 0.0)).norm() < 1e-14, "det(-I) = (-1)^2");
        }
        let m1 = zero_kernel_model(1, vec![RMat::zeros(1, 1)], vec![1.0], vec![0.5]);
        assert!((char_open(&m1, c64(0.3, 0.2)) + c64(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn pure_difference_root_closed_form() {
        let tau = 0.5 + std::f64::consts::SQRT_2;
        let m = zero_kernel_model(1, vec![scalar(0.6)], vec![tau / 2.0], vec![tau / 2.0]);
        let root = c64((0.6f64).ln() / tau, 0.0);
        assert!(char_open(&m, root).norm() < 1e-12);
    }

    #[test]
    fn realness_symmetry() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let tau = 1.6;
        let w1 = SampledKernel::from_fn(&[-tau, 0.0], 32, 1, |t| scalar(0.5 * (3.0 * t).cos()))
            .unwrap();
        let m = IdeModel::new(vec![scalar(-0.4)], vec![1.0], vec![0.6], w1).unwrap();
        for _ in 0..20 {
            let lam = c64(rng.gen_range(-2.0..2.0), rng.gen_range(0.0..25.0));
            let a = char_open(&m, lam);
            let b = char_open(&m, lam.conj());
            assert!((a.conj() - b).norm() < 1e-12 * (1.0 + a.norm()));
        }
    }

    #[test]
    fn target_full_cancellation_is_constant() {
        let tau = 1.3;
        let w1 = SampledKernel::from_fn(&[-tau, 0.0], 64, 1, |t| scalar((2.0 * t).sin() + 1.0))
            .unwrap();
        let m = IdeModel::new(vec![scalar(0.5)], vec![0.8], vec![0.5], w1.clone()).unwrap();
        // w2 = w1 (wdes = 0)
        let wdes = SampledKernel::zero(-1.0, 0.0, 1).unwrap();
        let c = FilteredController::new(0.0, vec![scalar(0.5)], vec![0.8], vec![0.5], w1, wdes)
            .unwrap();
        for &lam in &[c64(0.0, 0.0), c64(0.5, 7.0), c64(-1.0, 2.0)] {
            let v = char_target(&m, &c, lam).unwrap();
            assert!((v + c64(1.0, 0.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn closed_at_t0_nominal_matches_target() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let tau = 1.9;
        let w1 =
            SampledKernel::from_fn(&[-tau, 0.0], 64, 1, |t| scalar(0.7 + 0.2 * (t * 4.0).cos()))
                .unwrap();
        let m = IdeModel::new(vec![scalar(0.6)], vec![1.1], vec![0.8], w1.clone()).unwrap();
        let wdes = SampledKernel::constant(-1.0, 0.0, 0.45).unwrap();
        let c =
            FilteredController::new(0.0, vec![scalar(0.6)], vec![1.1], vec![0.8], w1, wdes).unwrap();
        for _ in 0..20 {
            let lam = c64(rng.gen_range(-2.0..2.0), rng.gen_range(-20.0..20.0));
            let a = char_closed(&m, &c, lam).unwrap();
            let b = char_target(&m, &c, lam).unwrap();
            assert!((a - b).norm() < 1e-12 * (1.0 + b.norm()));
        }
        // T = ∞ limit form recovers the open loop
        let c_inf = c.with_filter_constant(f64::INFINITY).unwrap();
        for _ in 0..10 {
            let lam = c64(rng.gen_range(-2.0..2.0), rng.gen_range(-20.0..20.0));
            let a = char_closed(&m, &c_inf, lam).unwrap();
            let b = char_open(&m, lam);
            assert!((a - b).norm() < 1e-12 * (1.0 + b.norm()));
        }
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let m = zero_kernel_model(1, vec![scalar(0.5)], vec![1.0], vec![0.5]);
        let w1hat = SampledKernel::zero(-1.5, 0.0, 2).unwrap();
        let wdes = SampledKernel::zero(-1.0, 0.0, 2).unwrap();
        let c = FilteredController::new(
            0.1,
            vec![RMat::zeros(2, 2)],
            vec![1.0],
            vec![0.5, 0.3],
            w1hat,
            wdes,
        )
        .unwrap();
        assert!(matches!(
            char_target(&m, &c, c64(0.0, 0.0)),
            Err(Error::Dimension(_))
        ));
    }
}
