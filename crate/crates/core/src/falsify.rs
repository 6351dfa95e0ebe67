//! Randomized refuters for rank-N-positivity and monotonicity, and the
//! combined property report.
//!
//! Only `is_cp` is a decision procedure. The searches here can exhibit a
//! counterexample but their silence proves nothing, except where they defer
//! to the exact Choi test (rank `N ≥ min(d_in, d_out)`).

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::operator::{eigh, hermitian_part, Operator, Tolerance};
use crate::random::{complex_gaussian, random_unit_vector, rng_from_seed};
use crate::scalar::{real, Real, C};
use crate::superop::{is_cp, is_dag_morphism, SuperOperator};

/// Kind of evidence backing a boolean claim.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Evidence {
    /// Decided by an exact finite-dimensional criterion.
    Exact,
    /// A randomized search; a negative result is not a proof.
    Falsifier,
    /// Statistical agreement with a sampled estimate.
    MonteCarlo,
}

/// Search budget for the randomized refuters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub restarts: usize,
    pub steps: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self { restarts: 200, steps: 100 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankWitness<T: Real> {
    pub rank: usize,
    pub t: Operator<T>,
    /// `⟨T, JΛ·T⟩` for the returned (unit HS norm) `T`.
    pub value: C<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankSearch<T: Real> {
    pub witness: Option<RankWitness<T>>,
    /// Smallest real part seen.
    pub best_value: T,
    pub evidence: Evidence,
}

/// `⟨T, JΛ·T⟩` where `JΛ` acts on `d_out x d_in` operators through the
/// Choi matrix.
pub fn rank_n_value<T: Real>(op: &SuperOperator<T>, t: &Operator<T>) -> Result<C<T>> {
    if t.dim_out() != op.dim_out() || t.dim_in() != op.dim_in() {
        return Err(Error::DimensionMismatch(format!(
            "test operator must be {}x{}",
            op.dim_out(),
            op.dim_in()
        )));
    }
    let v = t.vec_row();
    Ok(v.dotc(&(op.choi().matrix() * &v)))
}

/// Looks for an operator `T` of rank `≤ n` with `⟨T, JΛ T⟩` negative (or
/// non-real beyond tolerance). Random restarts plus projected gradient
/// descent on the unit HS sphere intersected with the rank-`n` variety.
///
/// For `n ≥ min(d_in, d_out)` the rank constraint is vacuous and the answer
/// comes from the Choi spectrum instead.
pub fn rank_n_positive_falsifier<T: Real>(
    op: &SuperOperator<T>,
    n: usize,
    budget: SearchBudget,
    seed: u64,
    tol: &Tolerance<T>,
) -> Result<RankSearch<T>> {
    let (di, dout) = (op.dim_in(), op.dim_out());
    let full = di.min(dout);
    if n < 1 || n > di.max(dout) {
        return Err(Error::InvalidArgument(format!(
            "rank {n} outside 1..={}",
            di.max(dout)
        )));
    }
    let c = op.choi().matrix();
    let ch = hermitian_part(c);
    let (vals, vecs) = eigh(&ch);
    let spread = vals.iter().fold(T::zero(), |a, &b| a.max(b.abs()));
    let thresh = tol.scaled(spread);
    let non_hermitian = !is_dag_morphism(op, tol);

    if n >= full {
        let lam = vals[0];
        let witness = if lam < -thresh {
            let t = Operator::unvec_row(&vecs.column(0).into_owned(), dout, di);
            let value = rank_n_value(op, &t)?;
            Some(RankWitness { rank: full, t, value })
        } else if non_hermitian {
            // a non-real quadratic form already fails positivity
            Some(nonreal_witness(op, dout, di)?)
        } else {
            None
        };
        return Ok(RankSearch {
            witness,
            best_value: lam,
            evidence: Evidence::Exact,
        });
    }

    let mut rng = rng_from_seed(seed);
    let step = if spread > T::zero() { T::lit(0.5) / spread } else { T::one() };
    let mut best = T::max_value().unwrap_or_else(T::one);
    for _ in 0..budget.restarts {
        let mut t = truncate_rank(&complex_gaussian::<T>(dout, di, &mut rng), n);
        for _ in 0..=budget.steps {
            let v = DVector::from_column_slice(t.transpose().as_slice());
            let value = v.dotc(&(c * &v));
            best = best.min(value.re);
            if value.re < -thresh || value.im.abs() > thresh {
                let t = Operator::from_matrix(t);
                return Ok(RankSearch {
                    witness: Some(RankWitness {
                        rank: n,
                        t,
                        value,
                    }),
                    best_value: best,
                    evidence: Evidence::Falsifier,
                });
            }
            let grad = &ch * &v;
            let next = &v - grad.map(|z| z * real(step + step));
            let m = DMatrix::from_row_slice(dout, di, next.as_slice());
            t = truncate_rank(&m, n);
        }
    }
    Ok(RankSearch {
        witness: None,
        best_value: best,
        evidence: Evidence::Falsifier,
    })
}

fn nonreal_witness<T: Real>(op: &SuperOperator<T>, dout: usize, di: usize) -> Result<RankWitness<T>> {
    // the anti-hermitian part has a nonzero eigenvalue; its eigenvector gives
    // a non-real value
    let c = op.choi().matrix();
    let anti = (c - c.adjoint()).map(|z| z * C::new(T::zero(), T::lit(-0.5)));
    let (vals, vecs) = eigh(&anti);
    let idx = if vals[0].abs() > vals[vals.len() - 1].abs() { 0 } else { vals.len() - 1 };
    let t = Operator::unvec_row(&vecs.column(idx).into_owned(), dout, di);
    let value = rank_n_value(op, &t)?;
    Ok(RankWitness {
        rank: di.min(dout),
        t,
        value,
    })
}

/// Best rank-`n` approximation, normalized to unit Frobenius norm.
fn truncate_rank<T: Real>(m: &DMatrix<C<T>>, n: usize) -> DMatrix<C<T>> {
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("requested u");
    let vt = svd.v_t.expect("requested v_t");
    let k = n.min(svd.singular_values.len());
    let mut out = DMatrix::zeros(m.nrows(), m.ncols());
    for i in 0..k {
        let s = real(svd.singular_values[i]);
        out += (u.column(i) * vt.row(i)).map(|z| z * s);
    }
    let norm = out.norm();
    if norm > T::zero() {
        out.map(|z| z / real(norm))
    } else {
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneWitness<T: Real> {
    /// Unit input vector; the positive input is `v v†`.
    pub v: DVector<C<T>>,
    pub rho: Operator<T>,
    /// Smallest eigenvalue of the hermitian part of `Λ(v v†)`.
    pub min_eigenvalue: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneSearch<T: Real> {
    pub witness: Option<MonotoneWitness<T>>,
    pub best_value: T,
    pub evidence: Evidence,
}

/// Searches rank-one inputs `v v†` for one whose image has a negative
/// eigenvalue. Alternates between the most negative output direction `w` for
/// fixed `v` and the best `v` for fixed `w` (both are eigenproblems).
pub fn monotone_falsifier<T: Real>(
    op: &SuperOperator<T>,
    budget: SearchBudget,
    seed: u64,
    tol: &Tolerance<T>,
) -> MonotoneSearch<T> {
    let (di, dout) = (op.dim_in(), op.dim_out());
    let c = op.choi().matrix();
    let spread = crate::operator::singular_values(c)
        .into_iter()
        .fold(T::zero(), |a, b| a.max(b));
    let thresh = tol.scaled(spread);
    let mut rng = rng_from_seed(seed);
    let mut best = T::max_value().unwrap_or_else(T::one);

    for _ in 0..budget.restarts {
        let mut v = random_unit_vector::<T>(di, &mut rng);
        for _ in 0..budget.steps.max(1) {
            let rho = Operator::ket_bra(&v, &v);
            let out = op.apply(&rho);
            let (vals, vecs) = eigh(out.matrix());
            best = best.min(vals[0]);
            if vals[0] < -thresh {
                return MonotoneSearch {
                    witness: Some(MonotoneWitness {
                        v,
                        rho,
                        min_eigenvalue: vals[0],
                    }),
                    best_value: best,
                    evidence: Evidence::Falsifier,
                };
            }
            let w = vecs.column(0).into_owned();
            // M[k, h] = w† Λ(E_kh) w; value = u† M u with u = conj(v)
            let m = DMatrix::from_fn(di, di, |k, h| {
                let mut acc = C::new(T::zero(), T::zero());
                for a in 0..dout {
                    for b in 0..dout {
                        acc += w[a].conj() * c[(a * di + k, b * di + h)] * w[b];
                    }
                }
                acc
            });
            let (_, uvecs) = eigh(&m);
            let next = uvecs.column(0).map(|z| z.conj());
            if (&next - &v).norm() < T::lit(1e-14) {
                break;
            }
            v = next;
        }
    }
    MonotoneSearch {
        witness: None,
        best_value: best,
        evidence: Evidence::Falsifier,
    }
}

/// Table-I style summary of one superoperator.
#[derive(Debug, Clone, PartialEq)]
pub struct PropertyReport<T: Real> {
    pub is_dag_morphism: bool,
    pub is_cp: bool,
    pub choi_min_eigenvalue: T,
    pub monotone_counterexample: Option<Operator<T>>,
    /// Smallest rank at which a negative (or non-real) value was found.
    pub rank_n_witness: Option<(usize, Operator<T>, T)>,
    pub is_dag_morphism_evidence: Evidence,
    pub is_cp_evidence: Evidence,
    pub monotone_evidence: Evidence,
}

pub fn property_report<T: Real>(
    op: &SuperOperator<T>,
    tol: &Tolerance<T>,
    budget: SearchBudget,
    seed: u64,
) -> PropertyReport<T> {
    let dag = is_dag_morphism(op, tol);
    let cp = is_cp(op, tol);
    let (monotone_counterexample, rank_n_witness) = if cp.psd {
        (None, None)
    } else {
        let mono = monotone_falsifier(op, budget, seed, tol)
            .witness
            .map(|w| w.rho);
        let full = op.dim_in().min(op.dim_out());
        let mut found = None;
        for n in 1..=full {
            let r = rank_n_positive_falsifier(op, n, budget, seed.wrapping_add(n as u64), tol)
                .expect("rank in range");
            if let Some(w) = r.witness {
                found = Some((w.rank, w.t, w.value.re));
                break;
            }
        }
        (mono, found)
    };
    PropertyReport {
        is_dag_morphism: dag,
        is_cp: cp.psd,
        choi_min_eigenvalue: cp.min_eigenvalue,
        monotone_counterexample,
        rank_n_witness,
        is_dag_morphism_evidence: Evidence::Exact,
        is_cp_evidence: Evidence::Exact,
        monotone_evidence: Evidence::Falsifier,
    }
}
