//! Generators of CP semigroups in GKSL form
//! `𝓛ρ = Ψρ − (Gρ + ρG) − i(Hρ − ρH)`: assembly, the exact dCP test, the
//! minimal presentation, trace conditions and the Haar-average bounds.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::falsify::{Evidence, SearchBudget};
use crate::operator::{
    eigh, hermitian_part, psd_check_matrix, singular_values, Operator, Tolerance,
};
use crate::random::{haar_unitary, random_unit_vector, rng_from_seed};
use crate::scalar::{cabs, real, Real, C};
use crate::superop::{is_cp, is_dag_morphism, sandwich, ChoiMatrix, SuperOperator};

/// A triple `(Ψ, G, H)` with `Ψ` CP and `G`, `H` hermitian.
///
/// `minimal` records whether the Choi matrix of `Ψ` annihilates `vec(Id)` and
/// `Tr H = 0`, which makes the presentation unique.
#[derive(Debug, Clone, PartialEq)]
pub struct GkslPresentation<T: Real> {
    pub psi: SuperOperator<T>,
    pub g: Operator<T>,
    pub h: Operator<T>,
    pub minimal: bool,
}

impl<T: Real> GkslPresentation<T> {
    /// Validated constructor.
    pub fn new(psi: SuperOperator<T>, g: Operator<T>, h: Operator<T>, tol: &Tolerance<T>) -> Result<Self> {
        check_shapes(&psi, &g, &h)?;
        let cp = is_cp(&psi, tol);
        if !cp.psd {
            return Err(Error::NotCp {
                min_eigenvalue: cp.min_eigenvalue.as_f64(),
            });
        }
        for x in [&g, &h] {
            let defect = x.hermiticity_defect();
            if defect > tol.scaled(x.frobenius_norm()) {
                return Err(Error::NotHermitian {
                    defect: defect.as_f64(),
                });
            }
        }
        let minimal = is_minimal(&psi, &h, tol);
        Ok(Self { psi, g, h, minimal })
    }

    /// Skips validation; the `minimal` flag is still computed with default
    /// tolerances. Panics on inconsistent shapes.
    pub fn new_unchecked(psi: SuperOperator<T>, g: Operator<T>, h: Operator<T>) -> Self {
        check_shapes(&psi, &g, &h).expect("presentation shapes");
        let minimal = is_minimal(&psi, &h, &Tolerance::default());
        Self { psi, g, h, minimal }
    }

    pub fn dim(&self) -> usize {
        self.g.dim_in()
    }

    pub fn generator(&self) -> SuperOperator<T> {
        build_generator(&self.psi, &self.g, &self.h)
    }

    /// Same generator with `G` shifted by `shift·Id`.
    pub fn shifted(&self, shift: T) -> Self {
        let d = self.dim();
        let g = &self.g + &Operator::identity(d).scale_real(shift);
        Self {
            psi: self.psi.clone(),
            g,
            h: self.h.clone(),
            minimal: self.minimal,
        }
    }

    /// Largest distance between corresponding components.
    pub fn distance(&self, other: &Self) -> T {
        self.psi
            .distance(&other.psi)
            .max(self.g.distance(&other.g))
            .max(self.h.distance(&other.h))
    }
}

fn check_shapes<T: Real>(psi: &SuperOperator<T>, g: &Operator<T>, h: &Operator<T>) -> Result<usize> {
    let d = g.dim_in();
    if !psi.is_endo() || psi.dim_in() != d || !g.is_square() || !h.is_square() || h.dim_in() != d {
        return Err(Error::DimensionMismatch(format!(
            "presentation needs Ψ on L(C^{d}) and {d}x{d} G, H"
        )));
    }
    Ok(d)
}

fn is_minimal<T: Real>(psi: &SuperOperator<T>, h: &Operator<T>, tol: &Tolerance<T>) -> bool {
    let d = h.dim_in();
    let omega = omega::<T>(d);
    let c = psi.choi().matrix();
    let leak = (c * &omega).norm();
    let scale = c.norm();
    leak <= tol.atol.max(tol.scaled(scale)) && cabs(h.trace()) <= tol.atol.max(tol.scaled(h.frobenius_norm()))
}

fn omega<T: Real>(d: usize) -> DVector<C<T>> {
    Operator::<T>::identity(d).vec_row()
}

fn build_generator<T: Real>(psi: &SuperOperator<T>, g: &Operator<T>, h: &Operator<T>) -> SuperOperator<T> {
    let id = Operator::identity(g.dim_in());
    let anti = sandwich(g, &id)
        .and_then(|a| a.add(&sandwich(&id, g)?))
        .expect("square");
    let comm = sandwich(h, &id)
        .and_then(|a| a.sub(&sandwich(&id, h)?))
        .expect("square");
    psi.sub(&anti)
        .and_then(|x| x.sub(&comm.scale(C::i())))
        .expect("dims agree")
}

/// `Ψ − (G□Id + Id□G) − i(H□Id − Id□H)`.
pub fn assemble_generator<T: Real>(p: &GkslPresentation<T>) -> Result<SuperOperator<T>> {
    check_shapes(&p.psi, &p.g, &p.h)?;
    Ok(p.generator())
}

/// Outcome of the exact dCP test.
#[derive(Debug, Clone, PartialEq)]
pub struct DcpVerdict<T: Real> {
    /// Choi matrix hermitian, i.e. the semigroup consists of †-morphisms.
    pub is_dag_morphism_generator: bool,
    /// Smallest eigenvalue of the Choi matrix compressed to the traceless
    /// subspace (`+∞`-free: zero for `d = 1`).
    pub compressed_choi_min_eig: T,
    pub is_dcp: bool,
    pub extracted: Option<GkslPresentation<T>>,
}

/// Compression of a `d² x d²` matrix onto the orthogonal complement of
/// `vec(Id)`, in the basis given by a Householder reflection that sends
/// `vec(Id)/√d` to the first unit vector.
pub(crate) fn compress_traceless<T: Real>(m: &DMatrix<C<T>>, d: usize) -> DMatrix<C<T>> {
    let n = d * d;
    if n <= 1 {
        return DMatrix::zeros(0, 0);
    }
    let mut u = omega::<T>(d).map(|z| z / real(T::of_usize(d).sqrt()));
    u[0] -= real(T::one());
    let beta = real(T::lit(2.0) / u.norm_squared());
    // R M R with R = I − β u u†, applied as two rank-one updates
    let left = m - (&u * (u.adjoint() * m)).map(|z| z * beta);
    let both = &left - ((&left * &u) * u.adjoint()).map(|z| z * beta);
    both.view((1, 1), (n - 1, n - 1)).into_owned()
}

/// Exact dCP decision: hermitian Choi matrix whose compression to the
/// traceless subspace is PSD.
pub fn is_dcp<T: Real>(l: &SuperOperator<T>, tol: &Tolerance<T>) -> Result<DcpVerdict<T>> {
    if !l.is_endo() {
        return Err(Error::DimensionMismatch("generators act on L(H)".into()));
    }
    let d = l.dim_in();
    let dm = l.choi().matrix();
    let herm = is_dag_morphism(l, tol);
    let comp = compress_traceless(&hermitian_part(dm), d);
    let min_eig = if comp.nrows() == 0 {
        T::zero()
    } else {
        crate::operator::eigvalsh(&comp)[0]
    };
    let psd = min_eig >= -tol.scaled(dm.norm());
    let is_dcp = herm && psd;
    let extracted = if is_dcp {
        Some(extract_minimal(l, tol)?)
    } else {
        None
    };
    Ok(DcpVerdict {
        is_dag_morphism_generator: herm,
        compressed_choi_min_eig: min_eig,
        is_dcp,
        extracted,
    })
}

/// The unique presentation with `Choi(Ψ)·vec(Id) = 0` and `Tr H = 0`.
pub fn minimal_presentation<T: Real>(l: &SuperOperator<T>, tol: &Tolerance<T>) -> Result<GkslPresentation<T>> {
    if !l.is_endo() {
        return Err(Error::DimensionMismatch("generators act on L(H)".into()));
    }
    let dm = l.choi().matrix();
    if !is_dag_morphism(l, tol) {
        return Err(Error::NonHermitianChoi {
            defect: (dm - dm.adjoint()).norm().as_f64(),
        });
    }
    let v = is_dcp(l, tol)?;
    if !v.is_dcp {
        return Err(Error::NotDcp {
            min_eigenvalue: v.compressed_choi_min_eig.as_f64(),
        });
    }
    Ok(v.extracted.expect("extracted when dCP"))
}

fn extract_minimal<T: Real>(l: &SuperOperator<T>, tol: &Tolerance<T>) -> Result<GkslPresentation<T>> {
    let d = l.dim_in();
    let dm = l.choi().matrix();
    let om = omega::<T>(d);
    let df = T::of_usize(d);
    let d_omega = dm * &om;
    let tau = om.dotc(&d_omega) / real(df + df);
    if tau.im.abs() > tol.scaled(dm.norm()) {
        return Err(Error::NonHermitianChoi {
            defect: tau.im.abs().as_f64(),
        });
    }
    let tau = tau.re;
    let mut a = Operator::unvec_row(&d_omega, d, d).into_matrix();
    for i in 0..d {
        a[(i, i)] -= real(tau);
    }
    let a = a.map(|z| z / real(df));
    let half = real(T::lit(0.5));
    let g = (&a + a.adjoint()).map(|z| -z * half);
    // (A† − A)/(2i) = i(A − A†)/2
    let h = (&a - a.adjoint()).map(|z| z * C::new(T::zero(), T::lit(0.5)));
    let p0 = crate::cp::traceless_projector::<T>(d);
    let xi = hermitian_part(&(&p0 * dm * &p0));
    let psi = SuperOperator::from_choi(ChoiMatrix::new(d, d, xi)?);
    let h = hermitian_part(&h);
    let g = hermitian_part(&g);
    Ok(GkslPresentation {
        psi,
        g: Operator::from_matrix(g),
        h: Operator::from_matrix(h),
        minimal: true,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TraceClass {
    Preserving,
    NonIncreasing,
    Neither,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceCondition<T: Real> {
    pub class: TraceClass,
    /// `Ψ†(Id) − 2G`.
    pub defect: Operator<T>,
    /// Largest eigenvalue of the defect (`≤ 0` for nonincreasing).
    pub defect_max_eigenvalue: T,
}

/// Classifies by `Ψ†(Id) − 2G`: zero means trace preserving, negative
/// semidefinite means trace nonincreasing.
pub fn trace_condition<T: Real>(p: &GkslPresentation<T>, tol: &Tolerance<T>) -> TraceCondition<T> {
    let d = p.dim();
    let dual = p.psi.adjoint().apply(&Operator::identity(d));
    let two_g = p.g.scale_real(T::lit(2.0));
    let defect = &dual - &two_g;
    let scale = dual.frobenius_norm() + two_g.frobenius_norm();
    let zero_tol = tol.atol.max(tol.scaled(scale));
    let neg = psd_check_matrix(&(-&defect).into_matrix(), tol);
    let eig_max = -neg.min_eigenvalue;
    let class = if defect.frobenius_norm() <= zero_tol {
        TraceClass::Preserving
    } else if neg.hermitian && neg.min_eigenvalue >= -zero_tol {
        TraceClass::NonIncreasing
    } else {
        TraceClass::Neither
    };
    TraceCondition {
        class,
        defect,
        defect_max_eigenvalue: eig_max,
    }
}

/// `∫ U A U† dU = (Tr A / d)·Id`.
pub fn haar_conjugation_average<T: Real>(a: &Operator<T>) -> Result<Operator<T>> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.dim_out(),
            cols: a.dim_in(),
        });
    }
    let d = a.dim_in();
    Ok(Operator::identity(d).scale(a.trace() / real(T::of_usize(d))))
}

/// Sample mean with the standard error of its Frobenius deviation
/// (square root of the summed per-entry variances of the mean).
#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloEstimate<T: Real> {
    pub mean: Operator<T>,
    pub sigma: T,
    pub samples: usize,
}

impl<T: Real> MonteCarloEstimate<T> {
    pub fn deviation(&self, exact: &Operator<T>) -> T {
        self.mean.distance(exact)
    }

    pub fn within_sigmas(&self, exact: &Operator<T>, k: T) -> bool {
        self.deviation(exact) <= k * self.sigma
    }
}

fn haar_mean<T: Real>(
    d: usize,
    samples: usize,
    seed: u64,
    mut f: impl FnMut(&Operator<T>) -> Operator<T>,
) -> Result<MonteCarloEstimate<T>> {
    if samples < 2 {
        return Err(Error::InvalidArgument("need at least two samples".into()));
    }
    let mut rng = rng_from_seed(seed);
    let mut sum = DMatrix::<C<T>>::zeros(d, d);
    let mut sumsq = DMatrix::<T>::zeros(d, d);
    for _ in 0..samples {
        let u = haar_unitary::<T>(d, &mut rng)?;
        let x = f(&u).into_matrix();
        sumsq += x.map(|z| z.norm_sqr());
        sum += x;
    }
    let n = T::of_usize(samples);
    let mean = sum.map(|z| z / real(n));
    let var = (0..d * d).fold(T::zero(), |acc, i| {
        acc + (sumsq[i] / n - mean[i].norm_sqr()).max(T::zero()) / (n - T::one())
    });
    Ok(MonteCarloEstimate {
        mean: Operator::from_matrix(mean),
        sigma: var.sqrt(),
        samples,
    })
}

/// Monte-Carlo estimate of `∫ U A U† dU`.
pub fn haar_conjugation_average_mc<T: Real>(a: &Operator<T>, samples: usize, seed: u64) -> Result<MonteCarloEstimate<T>> {
    haar_conjugation_average(a)?;
    haar_mean(a.dim_in(), samples, seed, |u| &(u * a) * &u.dagger())
}

/// `⟨(𝓛U)U†⟩` over the Haar measure, in closed form `unvec(Choi(𝓛)·vec Id)/d`.
/// Requires a minimal presentation; the result then equals
/// [`lindblad_trick_prediction`].
pub fn lindblad_trick_average<T: Real>(p: &GkslPresentation<T>) -> Result<Operator<T>> {
    if !p.minimal {
        return Err(Error::NotMinimal(
            "the Haar-average identity is stated for the minimal presentation".into(),
        ));
    }
    let d = p.dim();
    let l = p.generator();
    let v = l.choi().matrix() * omega::<T>(d);
    Ok(Operator::unvec_row(&v, d, d).scale_real(T::one() / T::of_usize(d)))
}

/// `−G − (Tr G / d)·Id − iH`.
pub fn lindblad_trick_prediction<T: Real>(p: &GkslPresentation<T>) -> Operator<T> {
    let d = p.dim();
    let tr_g = p.g.trace().re / T::of_usize(d);
    let shift = Operator::identity(d).scale_real(tr_g);
    &(&(-&p.g) - &shift) - &p.h.scale(C::i())
}

/// Monte-Carlo estimate of `⟨(𝓛U)U†⟩`.
pub fn lindblad_trick_average_mc<T: Real>(p: &GkslPresentation<T>, samples: usize, seed: u64) -> Result<MonteCarloEstimate<T>> {
    let l = p.generator();
    haar_mean(p.dim(), samples, seed, |u| &l.apply(u) * &u.dagger())
}

/// Lower estimate of the trace-norm-induced norm `sup ‖𝓛X‖₁/‖X‖₁`.
///
/// Extreme points of the trace-norm ball are rank one, so the search runs
/// over `v w†`: for fixed `(v, w)` take the polar factor `W` of `𝓛(v w†)`,
/// then move to the top singular pair of `𝓛†(W)`. Each step does not
/// decrease the objective.
pub fn induced_trace_norm_estimate<T: Real>(l: &SuperOperator<T>, budget: SearchBudget, seed: u64) -> T {
    let (di, dout) = (l.dim_in(), l.dim_out());
    let adj = l.adjoint();
    let mut rng = rng_from_seed(seed);
    let mut best = T::zero();
    let eval = |v: &DVector<C<T>>, w: &DVector<C<T>>| {
        let y = l.apply(&Operator::ket_bra(v, w));
        let s = singular_values(y.matrix()).into_iter().fold(T::zero(), |a, b| a + b);
        (y, s)
    };
    // the standard basis dyads are cheap, always-included starting points
    for k in 0..di {
        for h in 0..di {
            let e = l.apply(&Operator::dyad(di, di, k, h));
            best = best.max(singular_values(e.matrix()).into_iter().fold(T::zero(), |a, b| a + b));
        }
    }
    for _ in 0..budget.restarts.max(1) {
        let mut v = random_unit_vector::<T>(di, &mut rng);
        let mut w = random_unit_vector::<T>(di, &mut rng);
        let mut last = T::zero();
        for _ in 0..budget.steps.max(1) {
            let (y, s) = eval(&v, &w);
            best = best.max(s);
            if s <= last * (T::one() + T::lit(1e-12)) {
                break;
            }
            last = s;
            let svd = y.matrix().clone().svd(true, true);
            let polar = svd.u.expect("u") * svd.v_t.expect("v_t");
            let m = adj.apply(&Operator::from_matrix(polar));
            let svd = m.matrix().clone().svd(true, true);
            let idx = argmax(&svd.singular_values);
            v = svd.u.expect("u").column(idx).into_owned();
            w = svd.v_t.expect("v_t").row(idx).adjoint();
        }
    }
    let _ = dout;
    best
}

fn argmax<T: Real>(v: &DVector<T>) -> usize {
    let mut idx = 0;
    for i in 1..v.len() {
        if v[i] > v[idx] {
            idx = i;
        }
    }
    idx
}

/// `‖G‖, ‖H‖, ‖Ψ‖/5 ≤ ‖𝓛‖` checked against a lower estimate of `‖𝓛‖`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormBoundsReport {
    pub generator_norm_estimate: f64,
    pub g_norm: f64,
    pub h_norm: f64,
    /// Induced trace norm of `Ψ`, exact for CP maps: `‖Ψ†(Id)‖`.
    pub psi_norm: f64,
    pub slack: f64,
    pub g_ok: bool,
    pub h_ok: bool,
    pub psi_ok: bool,
    pub trace_nonincreasing: bool,
    pub holds: bool,
    pub evidence: Evidence,
}

pub const NORM_BOUND_SLACK: f64 = 1.05;

pub fn norm_bounds_check<T: Real>(
    l: &SuperOperator<T>,
    p: &GkslPresentation<T>,
    tol: &Tolerance<T>,
    budget: SearchBudget,
    seed: u64,
) -> Result<NormBoundsReport> {
    if !p.minimal {
        return Err(Error::NotMinimal("norm bounds use the minimal presentation".into()));
    }
    let est = induced_trace_norm_estimate(l, budget, seed).as_f64();
    let g = p.g.operator_norm().as_f64();
    let h = p.h.operator_norm().as_f64();
    let psi = p
        .psi
        .adjoint()
        .apply(&Operator::identity(p.dim()))
        .operator_norm()
        .as_f64();
    let atol = tol.atol.as_f64();
    let bound = NORM_BOUND_SLACK * est + atol;
    let g_ok = g <= bound;
    let h_ok = h <= bound;
    let psi_ok = psi <= 5.0 * bound;
    let tni = !matches!(trace_condition(p, tol).class, TraceClass::Neither);
    Ok(NormBoundsReport {
        generator_norm_estimate: est,
        g_norm: g,
        h_norm: h,
        psi_norm: psi,
        slack: NORM_BOUND_SLACK,
        g_ok,
        h_ok,
        psi_ok,
        trace_nonincreasing: tni,
        holds: g_ok && h_ok && psi_ok,
        evidence: Evidence::Falsifier,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupGeneratorVerdict<T: Real> {
    pub is_group_generator: bool,
    pub presentation: Option<GkslPresentation<T>>,
    /// Both `𝓛` and `−𝓛` generate trace-nonincreasing semigroups.
    pub trace_nonincreasing_both_ways: bool,
    /// `‖Ψ‖_F` and `‖G‖_F` of the minimal presentation.
    pub psi_norm: T,
    pub g_norm: T,
}

/// `𝓛` and `−𝓛` both dCP. Under trace nonincreasing in both directions this
/// forces `Ψ = 0` and `G = 0`, leaving `−i[H, ·]`.
pub fn is_cp_group_generator<T: Real>(l: &SuperOperator<T>, tol: &Tolerance<T>) -> Result<GroupGeneratorVerdict<T>> {
    let fwd = is_dcp(l, tol)?;
    let bwd = is_dcp(&l.scale_real(-T::one()), tol)?;
    let ok = fwd.is_dcp && bwd.is_dcp;
    let (presentation, tni, psi_norm, g_norm) = match (fwd.extracted, bwd.extracted) {
        (Some(p), Some(q)) if ok => {
            let both = !matches!(trace_condition(&p, tol).class, TraceClass::Neither)
                && !matches!(trace_condition(&q, tol).class, TraceClass::Neither);
            let (pn, gn) = (p.psi.frobenius_norm(), p.g.frobenius_norm());
            (Some(p), both, pn, gn)
        }
        _ => (None, false, T::zero(), T::zero()),
    };
    Ok(GroupGeneratorVerdict {
        is_group_generator: ok,
        presentation,
        trace_nonincreasing_both_ways: tni,
        psi_norm,
        g_norm,
    })
}

/// Minimal eigenvalue of the compressed Choi matrix together with its
/// eigenvector lifted back to `d x d` operators; used in reports.
pub fn compressed_choi_spectrum<T: Real>(l: &SuperOperator<T>) -> Vec<T> {
    let d = l.dim_in();
    let comp = compress_traceless(&hermitian_part(l.choi().matrix()), d);
    if comp.nrows() == 0 {
        return Vec::new();
    }
    eigh(&comp).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expm::expm;
    use crate::fixtures;
    use crate::random::{random_minimal_presentation, random_tni_presentation};
    use crate::scalar::cplx;

    type Op = Operator<f64>;
    type S = SuperOperator<f64>;

    fn tol() -> Tolerance<f64> {
        Tolerance::default()
    }

    fn sigma_z() -> Op {
        Op::from_real_rows(2, 2, &[1.0, 0.0, 0.0, -1.0])
    }

    fn exp_t(l: &S, t: f64) -> S {
        S::from_matrix(l.dim_in(), l.dim_out(), expm(&l.matrix().map(|z| z * cplx(t, 0.0)))).unwrap()
    }

    #[test]
    fn commutator_generator_is_von_neumann() {
        let h = sigma_z();
        let p = GkslPresentation::new(S::zero(2, 2), Op::zeros(2, 2), h.clone(), &tol()).unwrap();
        let l = assemble_generator(&p).unwrap();
        let mut rng = rng_from_seed(1);
        let rho = crate::random::random_density_matrix::<f64>(2, &mut rng);
        let expected = (&(&h * &rho) - &(&rho * &h)).scale(cplx(0.0, -1.0));
        assert!(l.apply(&rho).distance(&expected) < 1e-14);
    }

    #[test]
    fn anticommutator_on_identity() {
        let mut rng = rng_from_seed(2);
        let g = crate::random::random_hermitian::<f64>(3, &mut rng);
        let p = GkslPresentation::new(S::zero(3, 3), g.clone(), Op::zeros(3, 3), &tol()).unwrap();
        let out = assemble_generator(&p).unwrap().apply(&Op::identity(3));
        assert!(out.distance(&g.scale_real(-2.0)) < 1e-14);
    }

    #[test]
    fn amplitude_damping_on_excited_state() {
        let gamma = 0.7;
        let p = fixtures::amplitude_damping_presentation::<f64>(gamma);
        let l = assemble_generator(&p).unwrap();
        let out = l.apply(&Op::dyad(2, 2, 1, 1));
        let expected = Op::diag(&[gamma, -gamma]);
        assert!(out.distance(&expected) < 1e-14);
    }

    #[test]
    fn presentation_validation() {
        let t = tol();
        assert!(matches!(
            GkslPresentation::new(S::transpose_map(2), Op::zeros(2, 2), Op::zeros(2, 2), &t),
            Err(Error::NotCp { .. })
        ));
        let nh = Op::from_real_rows(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(
            GkslPresentation::new(S::zero(2, 2), nh.clone(), Op::zeros(2, 2), &t),
            Err(Error::NotHermitian { .. })
        ));
        assert!(matches!(
            GkslPresentation::new(S::zero(2, 2), Op::zeros(2, 2), nh, &t),
            Err(Error::NotHermitian { .. })
        ));
        assert!(GkslPresentation::new(S::zero(2, 2), Op::zeros(3, 3), Op::zeros(2, 2), &t).is_err());
    }

    #[test]
    fn dcp_examples() {
        let t = tol();
        let comm = fixtures::commutator_generator::<f64>(&sigma_z());
        assert!(is_dcp(&comm, &t).unwrap().is_dcp);

        let bad = S::transpose_map(2).sub(&S::identity(2)).unwrap();
        let v = is_dcp(&bad, &t).unwrap();
        assert!(v.is_dag_morphism_generator);
        assert!(!v.is_dcp);
        assert!(v.compressed_choi_min_eig < -0.5);

        let ad = fixtures::amplitude_damping_generator::<f64>(0.4);
        assert!(is_dcp(&ad, &t).unwrap().is_dcp);
        for s in [0.01, 0.1, 1.0] {
            assert!(is_cp(&exp_t(&ad, s), &t).psd);
        }
        // non-hermitian Choi fails the first sub-condition
        let v = is_dcp(&S::identity(2).scale(C::i()), &t).unwrap();
        assert!(!v.is_dag_morphism_generator && !v.is_dcp);
    }

    #[test]
    fn transpose_minus_identity_compressed_spectrum() {
        // Choi(T − Id) = SWAP − |Ω⟩⟨Ω|; on the traceless subspace SWAP has
        // eigenvalues {1, 1, −1} and the projector part vanishes
        let bad = S::transpose_map(2).sub(&S::identity(2)).unwrap();
        let spec = compressed_choi_spectrum(&bad);
        let expected = [-1.0, 1.0, 1.0];
        for (a, b) in spec.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12, "{spec:?}");
        }
    }

    #[test]
    fn minimal_extraction_of_commutator() {
        let h0 = Op::from_real_rows(2, 2, &[0.3, 0.5, 0.5, -0.3]);
        let l = fixtures::commutator_generator::<f64>(&h0);
        let p = minimal_presentation(&l, &tol()).unwrap();
        assert!(p.psi.frobenius_norm() < 1e-14);
        assert!(p.g.frobenius_norm() < 1e-14);
        assert!(p.h.distance(&h0) < 1e-14);
        assert!(p.minimal);
    }

    #[test]
    fn non_minimal_amplitude_damping_round_trip() {
        let gamma = 0.9;
        let min = fixtures::amplitude_damping_presentation::<f64>(gamma);
        let l = min.generator();
        // Kraus A' = A + c·Id, compensated in G and H
        let c = cplx::<f64>(0.4, -0.3);
        let a = Op::from_real_rows(2, 2, &[0.0, gamma.sqrt(), 0.0, 0.0]);
        let id = Op::identity(2);
        let a2 = &a + &id.scale(c);
        let psi2 = S::kraus_sum(&[a2]).unwrap();
        let k = &a.scale(c.conj()) + &id.scale_real(c.norm_sqr() / 2.0);
        let split = crate::operator::hermitian_split(&k).unwrap();
        let g2 = &min.g + &split.hermitian_part;
        let h2 = &min.h + &split.antihermitian_coefficient;
        let p2 = GkslPresentation::new(psi2, g2, h2, &tol()).unwrap();
        assert!(!p2.minimal);
        let l2 = p2.generator();
        assert!(l2.distance(&l) < 1e-14);
        let back = minimal_presentation(&l2, &tol()).unwrap();
        assert!(back.distance(&min) < 1e-13);
        assert!(back.generator().distance(&l) < 1e-13);
    }

    #[test]
    fn random_round_trip() {
        let mut rng = rng_from_seed(5);
        for d in 1..=4 {
            for jumps in [0, 1, 3] {
                let p = random_minimal_presentation::<f64>(d, jumps, &mut rng);
                assert!(p.minimal);
                let l = assemble_generator(&p).unwrap();
                let q = minimal_presentation(&l, &tol()).unwrap();
                let scale = l.frobenius_norm().max(1.0);
                assert!(q.distance(&p) <= 1e-10 * scale, "d={d}");
                assert!(q.generator().distance(&l) <= 1e-10 * scale);
                assert!(q.h.trace().norm() < 1e-12);
                let om = omega::<f64>(d);
                assert!((q.psi.choi().matrix() * om).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn minimal_errors() {
        let t = tol();
        assert!(matches!(
            minimal_presentation(&S::identity(2).scale(C::i()), &t),
            Err(Error::NonHermitianChoi { .. })
        ));
        let bad = S::transpose_map(2).sub(&S::identity(2)).unwrap();
        assert!(matches!(minimal_presentation(&bad, &t), Err(Error::NotDcp { .. })));
    }

    #[test]
    fn trace_condition_examples() {
        let t = tol();
        let ad = fixtures::amplitude_damping_presentation::<f64>(0.3);
        let tc = trace_condition(&ad, &t);
        assert_eq!(tc.class, TraceClass::Preserving);
        let dual = ad.psi.adjoint().apply(&Op::identity(2));
        assert!(dual.distance(&Op::diag(&[0.0, 0.3])) < 1e-14);

        let comm = GkslPresentation::new(S::zero(2, 2), Op::zeros(2, 2), sigma_z(), &t).unwrap();
        let tc = trace_condition(&comm, &t);
        assert_eq!(tc.class, TraceClass::Preserving);
        assert!(tc.defect.frobenius_norm() == 0.0);

        let shifted = ad.shifted(1.0);
        let tc = trace_condition(&shifted, &t);
        assert_eq!(tc.class, TraceClass::NonIncreasing);
        assert!(tc.defect.distance(&Op::identity(2).scale_real(-2.0)) < 1e-14);

        let up = ad.shifted(-1.0);
        assert_eq!(trace_condition(&up, &t).class, TraceClass::Neither);
    }

    #[test]
    fn haar_average_examples() {
        let id = Op::identity(3);
        assert!(haar_conjugation_average(&id).unwrap().distance(&id) < 1e-15);
        let tl = Op::from_real_rows(2, 2, &[1.0, 2.0, 3.0, -1.0]);
        assert!(haar_conjugation_average(&tl).unwrap().frobenius_norm() < 1e-15);
        assert!(haar_conjugation_average(&Op::zeros(2, 3)).is_err());
        let mut rng = rng_from_seed(6);
        let a = Op::from_matrix(crate::random::complex_gaussian(3, 3, &mut rng));
        let mc = haar_conjugation_average_mc(&a, 10_000, 7).unwrap();
        assert!(mc.within_sigmas(&haar_conjugation_average(&a).unwrap(), 3.0));
    }

    #[test]
    fn lindblad_trick_examples() {
        let h0 = sigma_z().scale_real(0.8);
        let p = GkslPresentation::new(S::zero(2, 2), Op::zeros(2, 2), h0.clone(), &tol()).unwrap();
        let avg = lindblad_trick_average(&p).unwrap();
        assert!(avg.distance(&h0.scale(cplx(0.0, -1.0))) < 1e-14);

        let ad = fixtures::amplitude_damping_presentation::<f64>(0.5).shifted(0.2);
        let avg = lindblad_trick_average(&ad).unwrap();
        assert!(avg.distance(&lindblad_trick_prediction(&ad)) < 1e-10);
        let mc = lindblad_trick_average_mc(&ad, 10_000, 3).unwrap();
        assert!(mc.within_sigmas(&avg, 3.0), "dev {} sigma {}", mc.deviation(&avg), mc.sigma);

        let mut rng = rng_from_seed(9);
        for d in 2..=4 {
            let p = random_tni_presentation::<f64>(d, 2, 1, &mut rng);
            let avg = lindblad_trick_average(&p).unwrap();
            assert!(avg.distance(&lindblad_trick_prediction(&p)) < 1e-10);
        }

        let non_min = GkslPresentation::new(S::identity(2), Op::zeros(2, 2), Op::zeros(2, 2), &tol()).unwrap();
        assert!(matches!(lindblad_trick_average(&non_min), Err(Error::NotMinimal(_))));
    }

    #[test]
    fn norm_bound_examples() {
        let t = tol();
        let b = SearchBudget { restarts: 30, steps: 50 };
        let comm = GkslPresentation::new(S::zero(2, 2), Op::zeros(2, 2), sigma_z(), &t).unwrap();
        let r = norm_bounds_check(&comm.generator(), &comm, &t, b, 1).unwrap();
        assert!((r.generator_norm_estimate - 2.0).abs() < 1e-9, "{}", r.generator_norm_estimate);
        assert!((r.h_norm - 1.0).abs() < 1e-12);
        assert!(r.holds);

        let g = Op::diag(&[0.5, 0.1]);
        let gonly = GkslPresentation::new(S::zero(2, 2), g, Op::zeros(2, 2), &t).unwrap();
        let r = norm_bounds_check(&gonly.generator(), &gonly, &t, b, 1).unwrap();
        assert!(r.g_ok && r.trace_nonincreasing);

        let zero = GkslPresentation::new(S::zero(2, 2), Op::zeros(2, 2), Op::zeros(2, 2), &t).unwrap();
        let r = norm_bounds_check(&zero.generator(), &zero, &t, b, 1).unwrap();
        assert_eq!(r.generator_norm_estimate, 0.0);
        assert!(r.holds);
    }

    #[test]
    fn induced_norm_estimate_is_exact_for_cp_maps() {
        // for CP Λ the induced trace norm is ‖Λ†(Id)‖
        let mut rng = rng_from_seed(12);
        let op = crate::random::random_cp_map::<f64>(3, 3, 2, &mut rng);
        let exact = op.adjoint().apply(&Op::identity(3)).operator_norm();
        let est = induced_trace_norm_estimate(&op, SearchBudget { restarts: 20, steps: 100 }, 3);
        assert!(est <= exact * (1.0 + 1e-12));
        assert!(est >= exact * 0.999, "est {est} exact {exact}");
    }

    #[test]
    fn group_generator_examples() {
        let t = tol();
        let comm = fixtures::commutator_generator::<f64>(&sigma_z());
        let v = is_cp_group_generator(&comm, &t).unwrap();
        assert!(v.is_group_generator && v.trace_nonincreasing_both_ways);
        let p = v.presentation.unwrap();
        assert!(p.psi.frobenius_norm() < 1e-14 && p.g.frobenius_norm() < 1e-14);
        assert!(p.h.distance(&sigma_z()) < 1e-14);

        let ad = fixtures::amplitude_damping_generator::<f64>(0.5);
        assert!(!is_cp_group_generator(&ad, &t).unwrap().is_group_generator);
        assert!(is_dcp(&ad.scale_real(-1.0), &t).unwrap().compressed_choi_min_eig < 0.0);

        assert!(is_cp_group_generator(&S::zero(2, 2), &t).unwrap().is_group_generator);
    }

    #[test]
    fn f32_round_trip() {
        let mut rng = rng_from_seed(4);
        let p = random_minimal_presentation::<f32>(3, 2, &mut rng);
        let l = p.generator();
        let q = minimal_presentation(&l, &Tolerance::default()).unwrap();
        assert!(q.distance(&p) < 1e-4 * l.frobenius_norm().max(1.0));
    }
}
