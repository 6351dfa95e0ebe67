//! Matrix exponential, delegated to nalgebra's scaling-and-squaring Padé.

use nalgebra::DMatrix;

use crate::scalar::{Real, C};

/// `exp(A)` for a square complex matrix.
pub fn expm<T: Real>(a: &DMatrix<C<T>>) -> DMatrix<C<T>> {
    assert!(a.is_square(), "expm needs a square matrix");
    if a.nrows() == 0 {
        return a.clone();
    }
    a.exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cplx;

    fn taylor(a: &DMatrix<C<f64>>, terms: usize) -> DMatrix<C<f64>> {
        let n = a.nrows();
        let mut out = DMatrix::identity(n, n);
        let mut term = DMatrix::identity(n, n);
        for k in 1..terms {
            term = &term * a / cplx(k as f64, 0.0);
            out += &term;
        }
        out
    }

    #[test]
    fn zero_and_diagonal() {
        let z = DMatrix::<C<f64>>::zeros(3, 3);
        assert_eq!(expm(&z), DMatrix::identity(3, 3));
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            cplx::<f64>(1.0, 0.0),
            cplx(-2.0, 1.0),
            cplx(0.0, 7.0),
        ]));
        let e = expm(&d);
        for i in 0..3 {
            assert!((e[(i, i)] - d[(i, i)].exp()).norm() < 1e-13 * d[(i, i)].exp().norm().max(1.0));
        }
    }

    #[test]
    fn matches_taylor_in_every_pade_regime() {
        let mut rng = crate::random::rng_from_seed(3);
        let base = crate::random::complex_gaussian::<f64>(4, 4, &mut rng);
        for scale in [1e-3, 0.05, 0.2, 0.5, 1.0, 3.0] {
            let a = base.map(|z| z * cplx(scale / 4.0, 0.0));
            let e = expm(&a);
            let t = taylor(&a, 60);
            assert!((&e - &t).norm() <= 1e-13 * t.norm(), "scale {scale}");
        }
    }

    #[test]
    fn large_norm_uses_squaring() {
        // exp(A) exp(-A) = I for a skew-hermitian A with large norm
        let mut rng = crate::random::rng_from_seed(4);
        let g = crate::random::complex_gaussian::<f64>(5, 5, &mut rng);
        let a = (&g - g.adjoint()).map(|z| z * cplx(10.0, 0.0));
        let e = expm(&a);
        let prod = &e * e.adjoint();
        assert!((prod - DMatrix::identity(5, 5)).norm() < 1e-11);
        let em = expm(&(-&a));
        assert!((&e * em - DMatrix::identity(5, 5)).norm() < 1e-11);
    }

    #[test]
    fn nilpotent_is_exact() {
        let a = DMatrix::from_row_slice(2, 2, &[C::new(0.0, 0.0), cplx(50.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0)]);
        let e = expm(&a);
        assert!((e[(0, 1)] - cplx(50.0, 0.0)).norm() < 1e-12);
        assert!((e[(0, 0)] - cplx(1.0, 0.0)).norm() < 1e-14);
    }
}
