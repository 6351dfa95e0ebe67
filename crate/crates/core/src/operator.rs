//! Dense operators between finite-dimensional Hilbert spaces and their
//! Hilbert–Schmidt geometry.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{real, Real, C};

/// Relative / absolute tolerances used by every numerical gate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance<T> {
    pub rtol: T,
    pub atol: T,
}

impl<T: Real> Tolerance<T> {
    pub fn new(rtol: T, atol: T) -> Result<Self> {
        let ok = |x: T| x.as_f64().is_finite() && x >= T::zero();
        if !ok(rtol) || !ok(atol) {
            return Err(Error::InvalidArgument(format!(
                "tolerances must be finite and nonnegative (rtol={rtol}, atol={atol})"
            )));
        }
        Ok(Self { rtol, atol })
    }

    /// `rtol * max(1, scale)`.
    pub fn scaled(&self, scale: T) -> T {
        self.rtol * T::one().max(scale)
    }
}

impl<T: Real> Default for Tolerance<T> {
    fn default() -> Self {
        Self {
            rtol: T::default_rtol(),
            atol: T::default_atol(),
        }
    }
}

/// A linear operator `H -> K`, stored as a dense `dim_out x dim_in` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator<T: Real> {
    m: DMatrix<C<T>>,
}

impl<T: Real> Operator<T> {
    pub fn from_matrix(m: DMatrix<C<T>>) -> Self {
        assert!(m.nrows() > 0 && m.ncols() > 0, "operators must be nonempty");
        Self { m }
    }

    /// Builds from row-major entries.
    pub fn from_row_slice(rows: usize, cols: usize, entries: &[C<T>]) -> Self {
        Self::from_matrix(DMatrix::from_row_slice(rows, cols, entries))
    }

    /// Builds from row-major real entries.
    pub fn from_real_rows(rows: usize, cols: usize, entries: &[f64]) -> Self {
        let e: Vec<C<T>> = entries.iter().map(|&x| real(T::lit(x))).collect();
        Self::from_row_slice(rows, cols, &e)
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> C<T>) -> Self {
        Self::from_matrix(DMatrix::from_fn(rows, cols, f))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_matrix(DMatrix::zeros(rows, cols))
    }

    pub fn identity(d: usize) -> Self {
        Self::from_matrix(DMatrix::identity(d, d))
    }

    /// Diagonal operator with real entries.
    pub fn diag(entries: &[T]) -> Self {
        let d = entries.len();
        Self::from_fn(d, d, |i, j| if i == j { real(entries[i]) } else { C::zero() })
    }

    /// Matrix unit `E_{kh} = e_k ē_h` of shape `rows x cols`.
    pub fn dyad(rows: usize, cols: usize, k: usize, h: usize) -> Self {
        let mut m = DMatrix::zeros(rows, cols);
        m[(k, h)] = C::one();
        Self::from_matrix(m)
    }

    /// Rank-one operator `v w̄`, i.e. `x ↦ v ⟨w, x⟩`.
    pub fn ket_bra(v: &DVector<C<T>>, w: &DVector<C<T>>) -> Self {
        Self::from_matrix(v * w.adjoint())
    }

    pub fn dim_in(&self) -> usize {
        self.m.ncols()
    }

    pub fn dim_out(&self) -> usize {
        self.m.nrows()
    }

    pub fn is_square(&self) -> bool {
        self.m.nrows() == self.m.ncols()
    }

    pub fn matrix(&self) -> &DMatrix<C<T>> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<C<T>> {
        self.m
    }

    pub fn get(&self, row: usize, col: usize) -> C<T> {
        self.m[(row, col)]
    }

    pub fn dagger(&self) -> Self {
        Self { m: self.m.adjoint() }
    }

    pub fn transpose(&self) -> Self {
        Self { m: self.m.transpose() }
    }

    pub fn trace(&self) -> C<T> {
        self.m.trace()
    }

    pub fn scale(&self, c: C<T>) -> Self {
        Self { m: self.m.map(|x| x * c) }
    }

    pub fn scale_real(&self, c: T) -> Self {
        self.scale(real(c))
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self { m: self.m.kronecker(&other.m) }
    }

    pub fn frobenius_norm(&self) -> T {
        self.m.norm()
    }

    /// Largest singular value.
    pub fn operator_norm(&self) -> T {
        singular_values(&self.m).into_iter().fold(T::zero(), |a, b| a.max(b))
    }

    /// Frobenius norm of `A - A†`.
    pub fn hermiticity_defect(&self) -> T {
        (&self.m - self.m.adjoint()).norm()
    }

    /// Column-stacking vectorization: entry `(r, c)` goes to index `c * rows + r`.
    pub fn vec_col(&self) -> DVector<C<T>> {
        DVector::from_column_slice(self.m.as_slice())
    }

    /// Row-major vectorization: entry `(r, c)` goes to index `r * cols + c`.
    /// This is the indexing of the Choi picture.
    pub fn vec_row(&self) -> DVector<C<T>> {
        DVector::from_column_slice(self.m.transpose().as_slice())
    }

    pub fn unvec_col(v: &DVector<C<T>>, rows: usize, cols: usize) -> Self {
        assert_eq!(v.len(), rows * cols);
        Self::from_matrix(DMatrix::from_column_slice(rows, cols, v.as_slice()))
    }

    pub fn unvec_row(v: &DVector<C<T>>, rows: usize, cols: usize) -> Self {
        assert_eq!(v.len(), rows * cols);
        Self::from_matrix(DMatrix::from_row_slice(rows, cols, v.as_slice()))
    }

    /// Entrywise distance in Frobenius norm; panics on shape mismatch.
    pub fn distance(&self, other: &Self) -> T {
        assert_eq!(self.m.shape(), other.m.shape());
        (&self.m - &other.m).norm()
    }

    pub fn all_finite(&self) -> bool {
        self.m
            .iter()
            .all(|z| z.re.as_f64().is_finite() && z.im.as_f64().is_finite())
    }

    fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.m.nrows())
        } else {
            Err(Error::NotSquare {
                rows: self.m.nrows(),
                cols: self.m.ncols(),
            })
        }
    }
}

impl<'a, T: Real> Add<&'a Operator<T>> for &'a Operator<T> {
    type Output = Operator<T>;
    fn add(self, rhs: &'a Operator<T>) -> Operator<T> {
        Operator { m: &self.m + &rhs.m }
    }
}

impl<'a, T: Real> Sub<&'a Operator<T>> for &'a Operator<T> {
    type Output = Operator<T>;
    fn sub(self, rhs: &'a Operator<T>) -> Operator<T> {
        Operator { m: &self.m - &rhs.m }
    }
}

impl<'a, T: Real> Mul<&'a Operator<T>> for &'a Operator<T> {
    type Output = Operator<T>;
    fn mul(self, rhs: &'a Operator<T>) -> Operator<T> {
        Operator { m: &self.m * &rhs.m }
    }
}

impl<T: Real> Neg for &Operator<T> {
    type Output = Operator<T>;
    fn neg(self) -> Operator<T> {
        Operator { m: -&self.m }
    }
}

/// `A = hermitian_part + i * antihermitian_coefficient`, both hermitian.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianSplit<T: Real> {
    pub hermitian_part: Operator<T>,
    pub antihermitian_coefficient: Operator<T>,
}

impl<T: Real> HermitianSplit<T> {
    pub fn recombine(&self) -> Operator<T> {
        &self.hermitian_part + &self.antihermitian_coefficient.scale(C::i())
    }
}

/// Outcome of a positive-semidefiniteness test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdCheck<T> {
    pub hermitian: bool,
    pub psd: bool,
    /// Smallest eigenvalue of the hermitian part.
    pub min_eigenvalue: T,
    pub max_eigenvalue: T,
}

/// Hilbert–Schmidt inner product `Tr(A† B)`.
pub fn hs_inner<T: Real>(a: &Operator<T>, b: &Operator<T>) -> Result<C<T>> {
    if a.matrix().shape() != b.matrix().shape() {
        return Err(Error::DimensionMismatch(format!(
            "hs_inner of {:?} and {:?}",
            a.matrix().shape(),
            b.matrix().shape()
        )));
    }
    Ok(a.matrix().dotc(b.matrix()))
}

/// Hermitian gate followed by an eigenvalue test on the hermitian part.
///
/// Hermitian iff `‖A − A†‖_F ≤ rtol·max(1, ‖A‖_F)`; PSD iff additionally
/// `λ_min ≥ −rtol·max(1, λ_max)`.
pub fn is_positive_semidefinite<T: Real>(a: &Operator<T>, tol: &Tolerance<T>) -> Result<PsdCheck<T>> {
    a.require_square()?;
    Ok(psd_check_matrix(a.matrix(), tol))
}

pub(crate) fn psd_check_matrix<T: Real>(m: &DMatrix<C<T>>, tol: &Tolerance<T>) -> PsdCheck<T> {
    let hermitian = (m - m.adjoint()).norm() <= tol.scaled(m.norm());
    let h = hermitian_part(m);
    let eig = eigvalsh(&h);
    let min_eigenvalue = eig.first().copied().unwrap_or_else(T::zero);
    let max_eigenvalue = eig.last().copied().unwrap_or_else(T::zero);
    let psd = hermitian && min_eigenvalue >= -tol.scaled(max_eigenvalue);
    PsdCheck {
        hermitian,
        psd,
        min_eigenvalue,
        max_eigenvalue,
    }
}

/// `((A + A†)/2, (A − A†)/(2i))`.
pub fn hermitian_split<T: Real>(a: &Operator<T>) -> Result<HermitianSplit<T>> {
    a.require_square()?;
    let half = real(T::lit(0.5));
    let m = a.matrix();
    let adj = m.adjoint();
    let herm = (m + &adj).map(|z| z * half);
    // (A − A†)/(2i) = −i(A − A†)/2
    let anti = (m - &adj).map(|z| z * C::new(T::zero(), T::lit(-0.5)));
    Ok(HermitianSplit {
        hermitian_part: Operator::from_matrix(herm),
        antihermitian_coefficient: Operator::from_matrix(anti),
    })
}

/// `A − (Tr A / d)·Id`.
pub fn traceless_projection<T: Real>(a: &Operator<T>) -> Result<Operator<T>> {
    let d = a.require_square()?;
    let shift = a.trace() / real(T::of_usize(d));
    let mut m = a.matrix().clone();
    for i in 0..d {
        m[(i, i)] -= shift;
    }
    Ok(Operator::from_matrix(m))
}

/// Sum of singular values.
pub fn trace_norm<T: Real>(a: &Operator<T>) -> T {
    singular_values(a.matrix())
        .into_iter()
        .fold(T::zero(), |acc, s| acc + s)
}

// ----------------------------------------------------------------------------
// dense helpers shared across modules

pub(crate) fn hermitian_part<T: Real>(m: &DMatrix<C<T>>) -> DMatrix<C<T>> {
    let half = real(T::lit(0.5));
    (m + m.adjoint()).map(|z| z * half)
}

pub(crate) fn singular_values<T: Real>(m: &DMatrix<C<T>>) -> Vec<T> {
    m.clone().svd(false, false).singular_values.iter().copied().collect()
}

/// Eigenvalues of a hermitian matrix in ascending order. Only the hermitian
/// part of the input is used.
pub(crate) fn eigvalsh<T: Real>(m: &DMatrix<C<T>>) -> Vec<T> {
    let mut v: Vec<T> = nalgebra::SymmetricEigen::new(hermitian_part(m))
        .eigenvalues
        .iter()
        .copied()
        .collect();
    v.sort_by(|a, b| a.partial_cmp(b).expect("NaN eigenvalue"));
    v
}

/// Eigenpairs of a hermitian matrix, eigenvalues ascending, eigenvectors as
/// columns in matching order.
pub(crate) fn eigh<T: Real>(m: &DMatrix<C<T>>) -> (Vec<T>, DMatrix<C<T>>) {
    let eig = nalgebra::SymmetricEigen::new(hermitian_part(m));
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .expect("NaN eigenvalue")
    });
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (vals, vecs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{complex_gaussian, random_haar_unitary, rng_from_seed};
    use crate::scalar::cplx;

    fn sx() -> Operator<f64> {
        Operator::from_real_rows(2, 2, &[0.0, 1.0, 1.0, 0.0])
    }

    fn sy() -> Operator<f64> {
        Operator::from_row_slice(2, 2, &[C::zero(), cplx(0.0, -1.0), cplx(0.0, 1.0), C::zero()])
    }

    #[test]
    fn hs_inner_examples() {
        let id = Operator::<f64>::identity(2);
        assert_eq!(hs_inner(&id, &id).unwrap(), cplx(2.0, 0.0));
        assert_eq!(hs_inner(&sx(), &sy()).unwrap(), C::zero());
        let mut rng = rng_from_seed(3);
        let a = Operator::<f64>::from_matrix(complex_gaussian(3, 3, &mut rng));
        let aa = hs_inner(&a, &a).unwrap();
        assert!(aa.im.abs() < 1e-14);
        assert!((aa.re - a.frobenius_norm().powi(2)).abs() < 1e-12);
        assert!(matches!(
            hs_inner(&a, &Operator::identity(2)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn psd_examples() {
        let tol = Tolerance::default();
        let p = is_positive_semidefinite(&Operator::<f64>::diag(&[1.0, 0.0]), &tol).unwrap();
        assert!(p.psd);
        assert_eq!(p.min_eigenvalue, 0.0);

        let n = is_positive_semidefinite(&Operator::<f64>::diag(&[1.0, -1e-3]), &tol).unwrap();
        assert!(!n.psd && n.hermitian);
        assert!((n.min_eigenvalue + 1e-3).abs() < 1e-15);

        let mut rng = rng_from_seed(11);
        let v = complex_gaussian::<f64>(4, 1, &mut rng).column(0).into_owned();
        let r = is_positive_semidefinite(&Operator::ket_bra(&v, &v), &tol).unwrap();
        assert!(r.psd);

        // not hermitian is reported separately from indefinite
        let a = Operator::<f64>::from_real_rows(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        let r = is_positive_semidefinite(&a, &tol).unwrap();
        assert!(!r.hermitian && !r.psd);

        let rect = Operator::<f64>::zeros(2, 3);
        assert!(matches!(
            is_positive_semidefinite(&rect, &tol),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn hermitian_split_examples() {
        let h = Operator::<f64>::from_row_slice(
            2,
            2,
            &[cplx(1.0, 0.0), cplx(2.0, -1.0), cplx(2.0, 1.0), cplx(-3.0, 0.0)],
        );
        let s = hermitian_split(&h).unwrap();
        assert!(s.hermitian_part.distance(&h) < 1e-15);
        assert!(s.antihermitian_coefficient.frobenius_norm() < 1e-15);

        let ih = h.scale(C::i());
        let s = hermitian_split(&ih).unwrap();
        assert!(s.hermitian_part.frobenius_norm() < 1e-15);
        assert!(s.antihermitian_coefficient.distance(&h) < 1e-15);

        let mut rng = rng_from_seed(5);
        let a = Operator::<f64>::from_matrix(complex_gaussian(4, 4, &mut rng));
        let s = hermitian_split(&a).unwrap();
        assert!(s.recombine().distance(&a) <= 1e-12);
        assert!(s.hermitian_part.hermiticity_defect() < 1e-15);
        assert!(s.antihermitian_coefficient.hermiticity_defect() < 1e-15);
        assert!(hermitian_split(&Operator::<f64>::zeros(1, 2)).is_err());
    }

    #[test]
    fn traceless_projection_examples() {
        let z = traceless_projection(&Operator::<f64>::identity(3)).unwrap();
        assert!(z.frobenius_norm() < 1e-15);
        assert_eq!(traceless_projection(&sx()).unwrap(), sx());
        let d = traceless_projection(&Operator::<f64>::diag(&[2.0, 0.0])).unwrap();
        assert_eq!(d, Operator::diag(&[1.0, -1.0]));
        assert!(traceless_projection(&Operator::<f64>::zeros(2, 1)).is_err());
    }

    #[test]
    fn trace_norm_examples() {
        let mut rng = rng_from_seed(8);
        let mut unit = |n| {
            let v = complex_gaussian::<f64>(n, 1, &mut rng).column(0).into_owned();
            let nv = v.norm();
            v.map(|z| z / nv)
        };
        let (v, w) = (unit(3), unit(3));
        assert!((trace_norm(&Operator::ket_bra(&v, &w)) - 1.0).abs() < 1e-12);
        assert!((trace_norm(&Operator::<f64>::diag(&[1.0, -1.0])) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn trace_norm_dual_lower_bound() {
        // max over unit operator-norm B of |Tr(B A)| equals ‖A‖₁: Haar
        // sampling gives a lower bound within 5%, the polar factor attains it
        let mut rng = rng_from_seed(21);
        let a = Operator::<f64>::from_matrix(complex_gaussian(2, 2, &mut rng));
        let tn = trace_norm(&a);
        let mut best = 0.0f64;
        for s in 0..4000u64 {
            let b = random_haar_unitary::<f64>(2, 1000 + s).unwrap();
            let val = (&b * &a).trace().norm();
            assert!(val <= tn * (1.0 + 1e-12));
            best = best.max(val);
        }
        assert!(best >= 0.95 * tn, "best {best} vs {tn}");

        let a = Operator::<f64>::from_matrix(complex_gaussian(3, 3, &mut rng));
        let svd = a.matrix().clone().svd(true, true);
        let polar = Operator::from_matrix((svd.u.unwrap() * svd.v_t.unwrap()).adjoint());
        let val = (&polar * &a).trace().norm();
        assert!((val - trace_norm(&a)).abs() < 1e-12);
    }

    #[test]
    fn vectorization_conventions() {
        let a = Operator::<f64>::from_real_rows(2, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let col: Vec<f64> = a.vec_col().iter().map(|z| z.re).collect();
        let row: Vec<f64> = a.vec_row().iter().map(|z| z.re).collect();
        assert_eq!(col, vec![1.0, 4.0, 2.0, 5.0, 3.0, 6.0]);
        assert_eq!(row, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        assert_eq!(Operator::unvec_col(&a.vec_col(), 2, 3), a);
        assert_eq!(Operator::unvec_row(&a.vec_row(), 2, 3), a);
    }

    #[test]
    fn tolerance_validation() {
        assert!(Tolerance::<f64>::new(-1.0, 0.0).is_err());
        assert!(Tolerance::<f64>::new(f64::NAN, 0.0).is_err());
        let t = Tolerance::<f64>::default();
        assert_eq!((t.rtol, t.atol), (1e-9, 1e-12));
    }

    #[test]
    fn f32_smoke() {
        let tol = Tolerance::<f32>::default();
        let p = is_positive_semidefinite(&Operator::<f32>::diag(&[1.0, 0.5]), &tol).unwrap();
        assert!(p.psd);
        assert!((trace_norm(&Operator::<f32>::diag(&[1.0, -1.0])) - 2.0).abs() < 1e-6);
    }
}
