//! Semigroups and two-time propagators: the reference exponential, the
//! Euler-limit product used in the sufficiency argument, and piecewise
//! constant splicing of time-dependent generators.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expm::expm;
use crate::gksl::is_dcp;
use crate::operator::{eigvalsh, singular_values, Tolerance};
use crate::scalar::{real, Real};
use crate::superop::{is_cp, SuperOperator};

/// `exp(t𝓛)`.
pub fn exp_generator<T: Real>(l: &SuperOperator<T>, t: T) -> SuperOperator<T> {
    let m = l.matrix().map(|z| z * real(t));
    SuperOperator::from_matrix(l.dim_in(), l.dim_out(), expm(&m)).expect("square generator")
}

/// `Id + ε(𝓛 + η·Tr(·)Id)` with the smallest `η ≥ 0` (times `1 + 1e-6`)
/// that makes its Choi matrix `|Ω⟩⟨Ω| + εChoi(𝓛) + εη·Id` PSD.
#[derive(Debug, Clone, PartialEq)]
pub struct EulerFactor<T: Real> {
    pub factor: SuperOperator<T>,
    pub eta: T,
}

pub fn euler_factor<T: Real>(l: &SuperOperator<T>, eps: T) -> EulerFactor<T> {
    let d = l.dim_in();
    let id = SuperOperator::identity(d);
    let test = id.choi().matrix() + l.choi().matrix().map(|z| z * real(eps));
    let lam = eigvalsh(&test)[0];
    let eta = (-lam).max(T::zero()) / eps * (T::one() + T::lit(1e-6));
    let shifted = l
        .add(&SuperOperator::trace_to_identity(d).scale_real(eta))
        .expect("same dims");
    EulerFactor {
        factor: id.add(&shifted.scale_real(eps)).expect("same dims"),
        eta,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EulerLimit<T: Real> {
    pub map: SuperOperator<T>,
    pub factor: SuperOperator<T>,
    pub eta: T,
    pub n: usize,
}

/// `[Id + (1/n)(𝓛 + η·Tr(·)Id)]ⁿ`, which tends to `exp(𝓛)` as `n` grows.
pub fn euler_limit_exp<T: Real>(l: &SuperOperator<T>, n: usize, tol: &Tolerance<T>) -> Result<EulerLimit<T>> {
    if n < 1 {
        return Err(Error::InvalidArgument("n must be >= 1".into()));
    }
    let v = is_dcp(l, tol)?;
    if !v.is_dcp {
        return Err(Error::NotDcp {
            min_eigenvalue: v.compressed_choi_min_eig.as_f64(),
        });
    }
    let f = euler_factor(l, T::one() / T::of_usize(n));
    let map = power(&f.factor, n);
    Ok(EulerLimit {
        map,
        factor: f.factor,
        eta: f.eta,
        n,
    })
}

fn power<T: Real>(base: &SuperOperator<T>, mut n: usize) -> SuperOperator<T> {
    let mut acc = SuperOperator::identity(base.dim_in());
    let mut b = base.clone();
    while n > 0 {
        if n & 1 == 1 {
            acc = acc.compose(&b).expect("same dims");
        }
        n >>= 1;
        if n > 0 {
            b = b.compose(&b).expect("same dims");
        }
    }
    acc
}

type EvalFn<T> = dyn Fn(T) -> Result<SuperOperator<T>> + Send + Sync;

/// Time-dependent generator `𝓛(t)` on the open interval `(t_start, t_end)`.
#[derive(Clone)]
pub struct GeneratorSchedule<T: Real> {
    t_start: T,
    t_end: T,
    dim: usize,
    eval: Arc<EvalFn<T>>,
    /// Lipschitz bound for `t ↦ 𝓛(t)`, when known.
    pub continuity_modulus: Option<T>,
}

impl<T: Real> fmt::Debug for GeneratorSchedule<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GeneratorSchedule")
            .field("t_start", &self.t_start)
            .field("t_end", &self.t_end)
            .field("dim", &self.dim)
            .field("continuity_modulus", &self.continuity_modulus)
            .finish_non_exhaustive()
    }
}

impl<T: Real> GeneratorSchedule<T> {
    pub fn from_fn(
        dim: usize,
        t_start: T,
        t_end: T,
        continuity_modulus: Option<T>,
        f: impl Fn(T) -> Result<SuperOperator<T>> + Send + Sync + 'static,
    ) -> Result<Self> {
        if !(t_start < t_end) {
            return Err(Error::TimeMismatch(format!("empty interval ({t_start}, {t_end})")));
        }
        if dim < 1 {
            return Err(Error::InvalidArgument("schedule dimension must be >= 1".into()));
        }
        Ok(Self {
            t_start,
            t_end,
            dim,
            eval: Arc::new(f),
            continuity_modulus,
        })
    }

    pub fn constant(l: SuperOperator<T>, t_start: T, t_end: T) -> Result<Self> {
        if !l.is_endo() {
            return Err(Error::DimensionMismatch("generators act on L(H)".into()));
        }
        let dim = l.dim_in();
        Self::from_fn(dim, t_start, t_end, Some(T::zero()), move |_| Ok(l.clone()))
    }

    /// `𝓛(t) = generators[k]` for `breakpoints[k] ≤ t < breakpoints[k+1]`.
    /// The interval is `(breakpoints[0], breakpoints[last])`, with the first
    /// generator also used as the left-endpoint value at `breakpoints[0]`.
    pub fn piecewise_constant(breakpoints: Vec<T>, generators: Vec<SuperOperator<T>>) -> Result<Self> {
        if breakpoints.len() != generators.len() + 1 || generators.is_empty() {
            return Err(Error::InvalidArgument(
                "piecewise schedule needs one more breakpoint than generators".into(),
            ));
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::TimeMismatch("breakpoints must increase strictly".into()));
        }
        let dim = generators[0].dim_in();
        if generators.iter().any(|g| !g.is_endo() || g.dim_in() != dim) {
            return Err(Error::DimensionMismatch("generators differ in dimension".into()));
        }
        let (a, b) = (breakpoints[0], breakpoints[breakpoints.len() - 1]);
        let bp = breakpoints.clone();
        Self::from_fn(dim, a, b, None, move |t| {
            let k = bp[1..].iter().position(|&x| t < x).unwrap_or(generators.len() - 1);
            Ok(generators[k].clone())
        })
    }

    pub fn t_start(&self) -> T {
        self.t_start
    }

    pub fn t_end(&self) -> T {
        self.t_end
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `𝓛(t)`, checked for shape. Accepts the closed interval so that grid
    /// endpoints evaluate cleanly.
    pub fn eval(&self, t: T) -> Result<SuperOperator<T>> {
        if t < self.t_start || t > self.t_end {
            return Err(Error::Schedule {
                t: t.as_f64(),
                reason: format!("outside [{}, {}]", self.t_start, self.t_end),
            });
        }
        let l = (self.eval)(t).map_err(|e| Error::Schedule {
            t: t.as_f64(),
            reason: e.to_string(),
        })?;
        if !l.is_endo() || l.dim_in() != self.dim {
            return Err(Error::Schedule {
                t: t.as_f64(),
                reason: format!("generator on C^{} instead of C^{}", l.dim_in(), self.dim),
            });
        }
        if !l.all_finite() {
            return Err(Error::Schedule {
                t: t.as_f64(),
                reason: "non-finite generator entries".into(),
            });
        }
        Ok(l)
    }
}

/// `Λ(t, s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Propagator<T: Real> {
    pub s: T,
    pub t: T,
    pub map: SuperOperator<T>,
    /// Left endpoints `t_n` and lengths of the factors, earliest first.
    pub steps: Vec<(T, T)>,
}

/// Left-endpoint grid `t_n = s + nε` on `[s, t]`; the last step is shortened
/// to end at `t`. A remainder below `1e-9·ε` is merged into the grid.
pub fn step_grid<T: Real>(s: T, t: T, eps: T) -> Result<Vec<(T, T)>> {
    if !(eps > T::zero()) || !eps.as_f64().is_finite() {
        return Err(Error::InvalidArgument(format!("step size must be positive, got {eps}")));
    }
    if t < s {
        return Err(Error::TimeMismatch(format!("s = {s} > t = {t}")));
    }
    let span = (t - s).as_f64();
    let e = eps.as_f64();
    let ratio = span / e;
    let mut full = ratio.floor() as usize;
    if ratio - ratio.floor() > 1.0 - 1e-9 {
        full += 1;
    }
    let mut steps = Vec::with_capacity(full + 1);
    for n in 0..full {
        steps.push((s + eps * T::of_usize(n), eps));
    }
    let t_last = s + eps * T::of_usize(full);
    let rem = t - t_last;
    if rem.as_f64() > 1e-9 * e {
        steps.push((t_last, rem));
    } else if let Some(last) = steps.last_mut() {
        // absorb rounding so the grid ends exactly at t
        last.1 = t - last.0;
    }
    Ok(steps)
}

/// `Λ_ε(t, s) = exp[(t − t_N)𝓛(t_N)] ··· exp[ε𝓛(t_0)]`.
pub fn propagate<T: Real>(schedule: &GeneratorSchedule<T>, s: T, t: T, eps: T) -> Result<Propagator<T>> {
    if s < schedule.t_start || t > schedule.t_end {
        return Err(Error::TimeMismatch(format!(
            "[{s}, {t}] not inside the schedule interval ({}, {})",
            schedule.t_start, schedule.t_end
        )));
    }
    let steps = step_grid(s, t, eps)?;
    let mut map = SuperOperator::identity(schedule.dim);
    for &(tn, len) in &steps {
        let f = exp_generator(&schedule.eval(tn)?, len);
        map = f.compose(&map)?;
    }
    Ok(Propagator { s, t, map, steps })
}

/// dCP status of each factor generator `𝓛(t_n)` and CP status of its
/// exponential.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorCertificate<T: Real> {
    pub t: T,
    pub length: T,
    pub generator_dcp: bool,
    pub compressed_choi_min_eig: T,
    pub factor_cp: bool,
    pub factor_choi_min_eig: T,
}

pub fn factor_certificates<T: Real>(
    schedule: &GeneratorSchedule<T>,
    s: T,
    t: T,
    eps: T,
    tol: &Tolerance<T>,
) -> Result<Vec<FactorCertificate<T>>> {
    step_grid(s, t, eps)?
        .into_iter()
        .map(|(tn, len)| {
            let l = schedule.eval(tn)?;
            let v = is_dcp(&l, tol)?;
            let cp = is_cp(&exp_generator(&l, len), tol);
            Ok(FactorCertificate {
                t: tn,
                length: len,
                generator_dcp: v.is_dcp,
                compressed_choi_min_eig: v.compressed_choi_min_eig,
                factor_cp: cp.psd,
                factor_choi_min_eig: cp.min_eigenvalue,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CocycleReport<T> {
    pub defect: T,
    pub scale: T,
    pub holds: bool,
}

/// `Λ(u, t)Λ(t, s)` against `Λ(u, s)`.
pub fn cocycle_check<T: Real>(
    p1: &Propagator<T>,
    p2: &Propagator<T>,
    p3: &Propagator<T>,
    tol: &Tolerance<T>,
) -> Result<CocycleReport<T>> {
    if p1.s != p2.t || p2.s != p3.s || p1.t != p3.t {
        return Err(Error::TimeMismatch(format!(
            "need Λ(u,t), Λ(t,s), Λ(u,s); got ({},{}), ({},{}), ({},{})",
            p1.t, p1.s, p2.t, p2.s, p3.t, p3.s
        )));
    }
    let composed = p1.map.compose(&p2.map)?;
    let defect = composed.distance(&p3.map);
    let scale = p3.map.frobenius_norm();
    Ok(CocycleReport {
        defect,
        scale,
        holds: defect <= tol.atol.max(tol.scaled(scale)),
    })
}

/// Condition number `σ_max/σ_min` of the propagator matrix (`∞` if singular).
pub fn invertibility_check<T: Real>(p: &Propagator<T>) -> T {
    condition_number(&p.map)
}

pub fn condition_number<T: Real>(op: &SuperOperator<T>) -> T {
    let sv = singular_values(op.matrix());
    let max = sv.iter().fold(T::zero(), |a, &b| a.max(b));
    let min = sv.iter().fold(max, |a, &b| a.min(b));
    if min > T::zero() {
        max / min
    } else {
        T::lit(f64::INFINITY)
    }
}

/// One row of an ε-halving study.
#[derive(Debug, Clone, PartialEq)]
pub struct HalvingRow<T: Real> {
    pub eps: T,
    /// `‖Λ_ε − Λ_{ε/2}‖_F`.
    pub diff_to_next: T,
    /// `diff(ε) / diff(ε/2)`; about 2 for a first-order scheme.
    pub ratio: Option<T>,
}

/// Self-convergence of [`propagate`] under repeated halving of `eps0`.
pub fn halving_study<T: Real>(
    schedule: &GeneratorSchedule<T>,
    s: T,
    t: T,
    eps0: T,
    halvings: usize,
) -> Result<(Vec<HalvingRow<T>>, Propagator<T>)> {
    let half = T::lit(0.5);
    let mut eps = eps0;
    let mut props = Vec::with_capacity(halvings + 2);
    for _ in 0..halvings + 2 {
        props.push(propagate(schedule, s, t, eps)?);
        eps *= half;
    }
    let mut rows: Vec<HalvingRow<T>> = Vec::new();
    let mut eps = eps0;
    for k in 0..=halvings {
        let diff = props[k].map.distance(&props[k + 1].map);
        let ratio = rows.last().map(|r: &HalvingRow<T>| r.diff_to_next / diff);
        rows.push(HalvingRow {
            eps,
            diff_to_next: diff,
            ratio,
        });
        eps *= half;
    }
    let finest = props.pop().expect("nonempty");
    Ok((rows, finest))
}
