//! Completely positive maps: Choi–Kraus extraction and assembly, and the
//! block form of the Choi matrix relative to the identity.

use nalgebra::{DMatrix, DVector};
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::operator::{eigh, psd_check_matrix, traceless_projection, Operator, Tolerance};
use crate::scalar::{cabs, real, Real, C};
use crate::superop::{is_cp, ChoiMatrix, SuperOperator};

/// Ordered Kraus operators presenting `Σ A_n □ A_n†`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausFamily<T: Real> {
    dim_in: usize,
    dim_out: usize,
    operators: Vec<Operator<T>>,
}

impl<T: Real> KrausFamily<T> {
    pub fn new(operators: Vec<Operator<T>>) -> Result<Self> {
        let first = operators
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty Kraus family".into()))?;
        let (dim_in, dim_out) = (first.dim_in(), first.dim_out());
        if operators
            .iter()
            .any(|a| a.dim_in() != dim_in || a.dim_out() != dim_out)
        {
            return Err(Error::DimensionMismatch("Kraus operators differ in shape".into()));
        }
        Ok(Self {
            dim_in,
            dim_out,
            operators,
        })
    }

    /// Family presenting the zero map (no operators).
    pub fn empty(dim_in: usize, dim_out: usize) -> Self {
        Self {
            dim_in,
            dim_out,
            operators: Vec::new(),
        }
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn operators(&self) -> &[Operator<T>] {
        &self.operators
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    /// `Σ A_n† A_n`, the image of the identity under the dual map.
    pub fn dual_identity(&self) -> Operator<T> {
        self.operators
            .iter()
            .fold(Operator::zeros(self.dim_in, self.dim_in), |acc, a| {
                &acc + &(&a.dagger() * a)
            })
    }
}

/// Result of [`kraus_extract`].
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiKraus<T: Real> {
    pub family: KrausFamily<T>,
    /// Retained Choi eigenvalues, descending.
    pub eigenvalues: Vec<T>,
    /// Set when two retained eigenvalues are closer than the relative
    /// tolerance; the operators inside such an eigenspace are then one of
    /// many valid choices.
    pub degenerate: bool,
}

/// Kraus operators from the spectral decomposition of the Choi matrix.
///
/// Eigenpairs with `λ > rtol·λ_max` are kept, in descending order, as
/// `A_n = √λ_n · unvec(eigenvector)`. Each `A_n` is rephased so its
/// largest-modulus entry (first in row-major order on ties) is real positive.
pub fn kraus_extract<T: Real>(op: &SuperOperator<T>, tol: &Tolerance<T>) -> Result<ChoiKraus<T>> {
    let check = is_cp(op, tol);
    if !check.psd {
        return Err(Error::NotCp {
            min_eigenvalue: check.min_eigenvalue.as_f64(),
        });
    }
    let (di, dout) = (op.dim_in(), op.dim_out());
    let (vals, vecs) = eigh(op.choi().matrix());
    let lmax = vals.last().copied().unwrap_or_else(T::zero);
    if lmax <= T::zero() {
        return Ok(ChoiKraus {
            family: KrausFamily::empty(di, dout),
            eigenvalues: Vec::new(),
            degenerate: false,
        });
    }
    let cutoff = tol.rtol * lmax;
    let mut ops = Vec::new();
    let mut kept = Vec::new();
    for i in (0..vals.len()).rev() {
        if vals[i] <= cutoff {
            break;
        }
        let v = vecs.column(i).into_owned();
        let a = Operator::unvec_row(&v, dout, di).scale_real(vals[i].sqrt());
        ops.push(fix_phase(a));
        kept.push(vals[i]);
    }
    let degenerate = kept.windows(2).any(|w| w[0] - w[1] < tol.rtol * lmax);
    Ok(ChoiKraus {
        family: KrausFamily::new(ops)?,
        eigenvalues: kept,
        degenerate,
    })
}

fn fix_phase<T: Real>(a: Operator<T>) -> Operator<T> {
    let m = a.matrix();
    let tie = T::one() - T::lit(1e-12);
    let mut best: Option<C<T>> = None;
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            let z = m[(r, c)];
            match best {
                Some(b) if cabs(z) * tie <= cabs(b) => {}
                _ => best = Some(z),
            }
        }
    }
    match best {
        Some(z) if cabs(z) > T::zero() => {
            let phase = z.conj() / real(cabs(z));
            a.scale(phase)
        }
        _ => a,
    }
}

/// `Σ A_n □ A_n†`; the Choi matrix is `Σ |A_n⟩⟨A_n|` by construction.
pub fn kraus_assemble<T: Real>(family: &KrausFamily<T>) -> SuperOperator<T> {
    if family.is_empty() {
        return SuperOperator::zero(family.dim_in, family.dim_out);
    }
    SuperOperator::kraus_sum(&family.operators).expect("family validated at construction")
}

/// Block decomposition `JΛ = Θ + |Id⟩⟨A| + |A⟩⟨Id|` with `Θ ≥ 0` supported
/// on the traceless operators and `A = B + (c/2)·Id`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntermediateForm<T: Real> {
    pub theta: ChoiMatrix<T>,
    pub a_op: Operator<T>,
    /// Traceless part of `a_op`.
    pub b: Operator<T>,
    pub c: T,
}

impl<T: Real> IntermediateForm<T> {
    /// `Θ + |Id⟩⟨A| + |A⟩⟨Id|` in Choi indexing.
    pub fn reconstruct_choi(&self) -> DMatrix<C<T>> {
        let d = self.a_op.dim_in();
        let id = Operator::<T>::identity(d).vec_row();
        let a = self.a_op.vec_row();
        self.theta.matrix() + &id * a.adjoint() + &a * id.adjoint()
    }
}

/// `Id − |Ω⟩⟨Ω|/d` on row-major vectorized `d x d` operators, `Ω = vec(Id)`.
pub(crate) fn traceless_projector<T: Real>(d: usize) -> DMatrix<C<T>> {
    let omega = Operator::<T>::identity(d).vec_row();
    let inv_d = real(T::one() / T::of_usize(d));
    DMatrix::identity(d * d, d * d) - (&omega * omega.adjoint()).map(|z| z * inv_d)
}

/// Extracts `(Θ, A, B, c)`. The sign convention for `B` is the one fixed by
/// `B = P⁰(unvec(D·vec Id))/d`.
pub fn intermediate_form<T: Real>(op: &SuperOperator<T>, tol: &Tolerance<T>) -> Result<IntermediateForm<T>> {
    if !op.is_endo() {
        return Err(Error::DimensionMismatch("intermediate form needs L(H) -> L(H)".into()));
    }
    let check = is_cp(op, tol);
    if !check.psd {
        return Err(Error::NotCp {
            min_eigenvalue: check.min_eigenvalue.as_f64(),
        });
    }
    let d = op.dim_in();
    let dm = op.choi().matrix();
    let omega = Operator::<T>::identity(d).vec_row();
    let d2 = T::of_usize(d * d);
    let c = omega.dotc(&(dm * &omega)).re / d2;
    let d_omega: DVector<C<T>> = dm * &omega;
    let b = traceless_projection(&Operator::unvec_row(&d_omega, d, d))?
        .scale_real(T::one() / T::of_usize(d));
    let p0 = traceless_projector::<T>(d);
    let theta_m = &p0 * dm * &p0;
    let theta_m = crate::operator::hermitian_part(&theta_m);
    let theta_check = psd_check_matrix(&theta_m, tol);
    if !theta_check.psd {
        return Err(Error::InconsistentBlock {
            min_eigenvalue: theta_check.min_eigenvalue.as_f64(),
        });
    }
    let half_c = real(c * T::lit(0.5));
    let mut a_op = b.clone().into_matrix();
    for i in 0..d {
        a_op[(i, i)] += half_c;
    }
    Ok(IntermediateForm {
        theta: ChoiMatrix::new(d, d, theta_m)?,
        a_op: Operator::from_matrix(a_op),
        b,
        c,
    })
}

/// Closure properties of the CP cone checked on concrete instances.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosureReport<T: Real> {
    pub first_cp: bool,
    pub second_cp: bool,
    /// `(a, b, is_cp(aΛ + bΓ), λ_min)` per sampled coefficient pair.
    pub sums: Vec<(T, T, bool, T)>,
    /// `Γ ∘ Λ`.
    pub composition_cp: bool,
    pub composition_min_eigenvalue: T,
    pub limit: Option<LimitCheck<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitCheck<T> {
    pub all_terms_cp: bool,
    pub limit_cp: bool,
    /// Distance from the last term to the limit.
    pub tail_distance: T,
}

/// Runs the cone checks. Sums are only guaranteed CP when both inputs are;
/// for a non-CP input the report simply records what happened.
pub fn cp_closure_checks<T: Real>(
    first: &SuperOperator<T>,
    second: &SuperOperator<T>,
    coefficients: &[(T, T)],
    sequence: Option<(&[SuperOperator<T>], &SuperOperator<T>)>,
    tol: &Tolerance<T>,
) -> Result<ClosureReport<T>> {
    if first.dim_in() != second.dim_in() || first.dim_out() != second.dim_out() {
        return Err(Error::DimensionMismatch("closure checks need equal dimensions".into()));
    }
    let composed = second.compose(first)?;
    let comp = is_cp(&composed, tol);
    let mut sums = Vec::with_capacity(coefficients.len());
    for &(a, b) in coefficients {
        if a < T::zero() || b < T::zero() {
            return Err(Error::InvalidArgument("coefficients must be nonnegative".into()));
        }
        let s = first.scale_real(a).add(&second.scale_real(b))?;
        let r = is_cp(&s, tol);
        sums.push((a, b, r.psd, r.min_eigenvalue));
    }
    let limit = match sequence {
        None => None,
        Some((terms, lim)) => {
            let all_terms_cp = terms.iter().all(|t| is_cp(t, tol).psd);
            let tail_distance = terms.last().map(|t| t.distance(lim)).unwrap_or_else(T::zero);
            Some(LimitCheck {
                all_terms_cp,
                limit_cp: is_cp(lim, tol).psd,
                tail_distance,
            })
        }
    };
    Ok(ClosureReport {
        first_cp: is_cp(first, tol).psd,
        second_cp: is_cp(second, tol).psd,
        sums,
        composition_cp: comp.psd,
        composition_min_eigenvalue: comp.min_eigenvalue,
        limit,
    })
}

/// Completely dephasing map `X ↦ diag(X)`.
pub fn complete_dephasing<T: Real>(d: usize) -> SuperOperator<T> {
    SuperOperator::from_map(d, d, |x| {
        Operator::from_fn(d, d, |i, j| if i == j { x.get(i, i) } else { C::zero() })
    })
    .expect("square")
}

/// The identity as a one-element family.
pub fn identity_family<T: Real>(d: usize) -> KrausFamily<T> {
    KrausFamily::new(vec![Operator::identity(d)]).expect("nonempty")
}
