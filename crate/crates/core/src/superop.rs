//! Superoperators, sandwich operators and the Jamiołkowski transform.
//!
//! # Conventions
//!
//! A superoperator `Λ: L(H) -> L(K)` with `d_H = dim_in`, `d_K = dim_out` is
//! stored as the `d_K² x d_H²` matrix acting on column-stacked operators:
//! the matrix unit `E_{kh}` has vector index `h·d_H + k`, so
//!
//! ```text
//! matrix[(n·d_K + m, h·d_H + k)] = Λ(E_kh)[m, n]
//! ```
//!
//! The Choi matrix groups indices the other way round,
//!
//! ```text
//! choi[(m·d_H + k, n·d_H + h)] = Λ(E_kh)[m, n]
//! ```
//!
//! which is the matrix of `JΛ` acting on row-major vectorized `d_K x d_H`
//! operators. With these conventions a rank-one Choi matrix `|A⟩⟨B|`
//! (row-major kets) corresponds to the sandwich `X ↦ A X B†`.

use nalgebra::DMatrix;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::operator::{psd_check_matrix, Operator, PsdCheck, Tolerance};
use crate::scalar::{real, Real, C};

/// Convention tag carried by serialized superoperators.
pub const VECTORIZATION_CONVENTION: &str = "column-stacking/v1";

/// Matrix of `JΛ` in the row-major (Choi) indexing.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix<T: Real> {
    dim_in: usize,
    dim_out: usize,
    m: DMatrix<C<T>>,
}

impl<T: Real> ChoiMatrix<T> {
    pub fn new(dim_in: usize, dim_out: usize, m: DMatrix<C<T>>) -> Result<Self> {
        let n = dim_in * dim_out;
        if dim_in == 0 || dim_out == 0 || m.shape() != (n, n) {
            return Err(Error::DimensionMismatch(format!(
                "Choi matrix for {dim_in}->{dim_out} must be {n}x{n}, got {:?}",
                m.shape()
            )));
        }
        Ok(Self { dim_in, dim_out, m })
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn matrix(&self) -> &DMatrix<C<T>> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<C<T>> {
        self.m
    }

    pub fn as_operator(&self) -> Operator<T> {
        Operator::from_matrix(self.m.clone())
    }
}

/// A linear map `L(H) -> L(K)` with its Choi matrix computed at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperOperator<T: Real> {
    dim_in: usize,
    dim_out: usize,
    m: DMatrix<C<T>>,
    choi: ChoiMatrix<T>,
}

/// Moves entries between the superoperator and Choi layouts. The map is an
/// index permutation; `inverse` selects the direction.
fn reshuffle<T: Real>(src: &DMatrix<C<T>>, d_in: usize, d_out: usize, to_choi: bool) -> DMatrix<C<T>> {
    let (rows, cols) = if to_choi {
        (d_out * d_in, d_out * d_in)
    } else {
        (d_out * d_out, d_in * d_in)
    };
    let mut dst = DMatrix::zeros(rows, cols);
    for m in 0..d_out {
        for n in 0..d_out {
            for k in 0..d_in {
                for h in 0..d_in {
                    let s = (n * d_out + m, h * d_in + k);
                    let c = (m * d_in + k, n * d_in + h);
                    if to_choi {
                        dst[c] = src[s];
                    } else {
                        dst[s] = src[c];
                    }
                }
            }
        }
    }
    dst
}

impl<T: Real> SuperOperator<T> {
    pub fn from_matrix(dim_in: usize, dim_out: usize, m: DMatrix<C<T>>) -> Result<Self> {
        if dim_in == 0 || dim_out == 0 || m.shape() != (dim_out * dim_out, dim_in * dim_in) {
            return Err(Error::DimensionMismatch(format!(
                "superoperator {dim_in}->{dim_out} must be {}x{}, got {:?}",
                dim_out * dim_out,
                dim_in * dim_in,
                m.shape()
            )));
        }
        let choi = ChoiMatrix {
            dim_in,
            dim_out,
            m: reshuffle(&m, dim_in, dim_out, true),
        };
        Ok(Self { dim_in, dim_out, m, choi })
    }

    /// Builds the superoperator whose Choi matrix is `choi`.
    pub fn from_choi(choi: ChoiMatrix<T>) -> Self {
        let m = reshuffle(&choi.m, choi.dim_in, choi.dim_out, false);
        Self {
            dim_in: choi.dim_in,
            dim_out: choi.dim_out,
            m,
            choi,
        }
    }

    /// Tabulates an arbitrary linear map on the matrix units.
    pub fn from_map(dim_in: usize, dim_out: usize, mut f: impl FnMut(&Operator<T>) -> Operator<T>) -> Result<Self> {
        let mut m = DMatrix::zeros(dim_out * dim_out, dim_in * dim_in);
        for h in 0..dim_in {
            for k in 0..dim_in {
                let y = f(&Operator::dyad(dim_in, dim_in, k, h));
                if y.dim_in() != dim_out || y.dim_out() != dim_out {
                    return Err(Error::DimensionMismatch(format!(
                        "map produced {}x{} output, expected {dim_out}x{dim_out}",
                        y.dim_out(),
                        y.dim_in()
                    )));
                }
                m.column_mut(h * dim_in + k).copy_from(&y.vec_col());
            }
        }
        Self::from_matrix(dim_in, dim_out, m)
    }

    pub fn zero(dim_in: usize, dim_out: usize) -> Self {
        Self::from_matrix(dim_in, dim_out, DMatrix::zeros(dim_out * dim_out, dim_in * dim_in))
            .expect("consistent shape")
    }

    pub fn identity(d: usize) -> Self {
        Self::from_matrix(d, d, DMatrix::identity(d * d, d * d)).expect("consistent shape")
    }

    /// `X ↦ Tr(X)·Id`, the dyad `Id Īd`; its Choi matrix is the identity.
    pub fn trace_to_identity(d: usize) -> Self {
        Self::from_choi(ChoiMatrix {
            dim_in: d,
            dim_out: d,
            m: DMatrix::identity(d * d, d * d),
        })
    }

    /// `X ↦ Xᵀ` in the standard basis. Positive but not 2-positive for `d ≥ 2`.
    pub fn transpose_map(d: usize) -> Self {
        Self::from_map(d, d, |x| x.transpose()).expect("square")
    }

    /// `Σ A_n □ A_n†`.
    pub fn kraus_sum(ops: &[Operator<T>]) -> Result<Self> {
        let first = ops
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty Kraus family".into()))?;
        let (d_in, d_out) = (first.dim_in(), first.dim_out());
        let mut choi = DMatrix::zeros(d_in * d_out, d_in * d_out);
        for a in ops {
            if a.dim_in() != d_in || a.dim_out() != d_out {
                return Err(Error::DimensionMismatch("Kraus operators differ in shape".into()));
            }
            let v = a.vec_row();
            choi += &v * v.adjoint();
        }
        Ok(Self::from_choi(ChoiMatrix::new(d_in, d_out, choi)?))
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn matrix(&self) -> &DMatrix<C<T>> {
        &self.m
    }

    pub fn choi(&self) -> &ChoiMatrix<T> {
        &self.choi
    }

    pub fn is_endo(&self) -> bool {
        self.dim_in == self.dim_out
    }

    pub fn apply(&self, x: &Operator<T>) -> Operator<T> {
        assert!(
            x.dim_in() == self.dim_in && x.dim_out() == self.dim_in,
            "input must be {0}x{0}",
            self.dim_in
        );
        Operator::unvec_col(&(&self.m * x.vec_col()), self.dim_out, self.dim_out)
    }

    pub fn try_apply(&self, x: &Operator<T>) -> Result<Operator<T>> {
        if x.dim_in() != self.dim_in || x.dim_out() != self.dim_in {
            return Err(Error::DimensionMismatch(format!(
                "superoperator on {0}x{0} applied to {1}x{2}",
                self.dim_in,
                x.dim_out(),
                x.dim_in()
            )));
        }
        Ok(self.apply(x))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if inner.dim_out != self.dim_in {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose {}->{} after {}->{}",
                self.dim_in, self.dim_out, inner.dim_in, inner.dim_out
            )));
        }
        Self::from_matrix(inner.dim_in, self.dim_out, &self.m * &inner.m)
    }

    fn same_dims(&self, other: &Self) -> Result<()> {
        if self.dim_in != other.dim_in || self.dim_out != other.dim_out {
            return Err(Error::DimensionMismatch(format!(
                "{}->{} vs {}->{}",
                self.dim_in, self.dim_out, other.dim_in, other.dim_out
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_dims(other)?;
        Self::from_matrix(self.dim_in, self.dim_out, &self.m + &other.m)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_dims(other)?;
        Self::from_matrix(self.dim_in, self.dim_out, &self.m - &other.m)
    }

    pub fn scale(&self, c: C<T>) -> Self {
        Self::from_matrix(self.dim_in, self.dim_out, self.m.map(|x| x * c)).expect("shape kept")
    }

    pub fn scale_real(&self, c: T) -> Self {
        self.scale(real(c))
    }

    /// Hilbert–Schmidt adjoint. Column stacking is unitary, so this is the
    /// conjugate transpose of the matrix.
    pub fn adjoint(&self) -> Self {
        Self::from_matrix(self.dim_out, self.dim_in, self.m.adjoint()).expect("shape kept")
    }

    pub fn frobenius_norm(&self) -> T {
        self.m.norm()
    }

    pub fn distance(&self, other: &Self) -> T {
        assert_eq!(self.m.shape(), other.m.shape());
        (&self.m - &other.m).norm()
    }

    /// `Λ ⊗ Γ` acting on `L(H₁ ⊗ H₂)`, Kronecker order `(first, second)`.
    pub fn kron(&self, other: &Self) -> Self {
        let (a, b) = (self.dim_in, other.dim_in);
        Self::from_map(a * b, self.dim_out * other.dim_out, |x| {
            // x is a matrix unit E_{(k1,k2),(h1,h2)}
            let (r, c) = argmax_unit(x);
            let (k1, k2, h1, h2) = (r / b, r % b, c / b, c % b);
            self.apply(&Operator::dyad(a, a, k1, h1))
                .kron(&other.apply(&Operator::dyad(b, b, k2, h2)))
        })
        .expect("dims consistent")
    }

    pub fn all_finite(&self) -> bool {
        self.m
            .iter()
            .all(|z| z.re.as_f64().is_finite() && z.im.as_f64().is_finite())
    }
}

fn argmax_unit<T: Real>(x: &Operator<T>) -> (usize, usize) {
    let m = x.matrix();
    for c in 0..m.ncols() {
        for r in 0..m.nrows() {
            if !m[(r, c)].is_zero() {
                return (r, c);
            }
        }
    }
    unreachable!("matrix unit has a nonzero entry")
}

/// `X ↦ S X T`.
pub fn sandwich<T: Real>(s: &Operator<T>, t: &Operator<T>) -> Result<SuperOperator<T>> {
    // X: dim_in x dim_in, S X T: dim_out x dim_out
    let d_in = s.dim_in();
    let d_out = s.dim_out();
    if t.dim_out() != d_in || t.dim_in() != d_out {
        return Err(Error::DimensionMismatch(format!(
            "sandwich needs S: {d_in}->{d_out} and T: {d_out}->{d_in}, got T: {}->{}",
            t.dim_in(),
            t.dim_out()
        )));
    }
    // vec(S X T) = (Tᵀ ⊗ S) vec(X) for column stacking
    let m = t.matrix().transpose().kronecker(s.matrix());
    SuperOperator::from_matrix(d_in, d_out, m)
}

/// The Choi matrix of `Λ`.
pub fn jamiolkowski<T: Real>(op: &SuperOperator<T>) -> ChoiMatrix<T> {
    op.choi.clone()
}

/// Inverse of [`jamiolkowski`]; the same index permutation run backwards.
pub fn jamiolkowski_inv<T: Real>(c: &ChoiMatrix<T>) -> SuperOperator<T> {
    SuperOperator::from_choi(c.clone())
}

/// The transform `J` on `L(L(H))` as a superoperator-valued involution:
/// `(JΛ)(E_nh)[m, k] = Λ(E_kh)[m, n]`.
///
/// The matrix of `JΛ` in row-major vectorization is the Choi matrix of `Λ`.
pub fn jamiolkowski_transform<T: Real>(op: &SuperOperator<T>) -> Result<SuperOperator<T>> {
    if !op.is_endo() {
        return Err(Error::DimensionMismatch(
            "the involutive transform needs dim_in == dim_out".into(),
        ));
    }
    let d = op.dim_in;
    let mut m = DMatrix::zeros(d * d, d * d);
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                for e in 0..d {
                    // swap second and third slot of (out_r, out_c, in_r, in_c)
                    // source entry Λ(E_{c e})[a, b] -> target (JΛ)(E_{b e})[a, c]
                    m[(c * d + a, e * d + b)] = op.m[(b * d + a, e * d + c)];
                }
            }
        }
    }
    SuperOperator::from_matrix(d, d, m)
}

/// `Λ ⊗ Id_{L(C^N)}` on `(d·N)`-dimensional operators, system factor first.
pub fn tensor_with_identity<T: Real>(op: &SuperOperator<T>, n: usize) -> Result<SuperOperator<T>> {
    if n < 1 {
        return Err(Error::InvalidArgument("ancilla dimension must be >= 1".into()));
    }
    Ok(op.kron(&SuperOperator::identity(n)))
}

/// Choi-hermiticity test for †-morphisms.
pub fn is_dag_morphism<T: Real>(op: &SuperOperator<T>, tol: &Tolerance<T>) -> bool {
    let c = op.choi.matrix();
    (c - c.adjoint()).norm() <= tol.scaled(c.norm())
}

/// Exact CP decision: Choi matrix PSD within tolerance.
pub fn is_cp<T: Real>(op: &SuperOperator<T>, tol: &Tolerance<T>) -> PsdCheck<T> {
    psd_check_matrix(op.choi.matrix(), tol)
}

/// Restricts a square superoperator to operators of the form `V X V†`
/// and compresses back: `X ↦ V† Λ(V X V†) V`, `V` an isometry `n -> d`.
pub fn conjugate_by_isometry<T: Real>(op: &SuperOperator<T>, v: &Operator<T>) -> Result<SuperOperator<T>> {
    if !op.is_endo() || v.dim_out() != op.dim_in {
        return Err(Error::DimensionMismatch("isometry does not fit superoperator".into()));
    }
    let vd = v.dagger();
    let n = v.dim_in();
    SuperOperator::from_map(n, n, |x| &(&vd * &op.apply(&(&(v * x) * &vd))) * v)
}
