//! Nested truncations `H_{n₁} ⊂ H_{n₂} ⊂ … ⊂ C^D`, lifted projections
//! `P̂ = P□P`, projective sequences and truncation studies.
//!
//! Compressions keep the ambient shape; `P_n` is zero outside its block.

use crate::error::{Error, Result};
use crate::evolution::exp_generator;
use crate::gksl::is_dcp;
use crate::operator::{trace_norm, Operator, Tolerance};
use crate::scalar::Real;
use crate::superop::{is_cp, sandwich, SuperOperator};

/// `dims` strictly increasing, the last one at most `ambient_dim`; `H_n` is
/// spanned by the first `n` columns of `basis`.
#[derive(Debug, Clone, PartialEq)]
pub struct Filtration<T: Real> {
    ambient_dim: usize,
    dims: Vec<usize>,
    basis: Operator<T>,
}

impl<T: Real> Filtration<T> {
    /// Filtration along the standard basis.
    pub fn standard(ambient_dim: usize, dims: Vec<usize>) -> Result<Self> {
        if ambient_dim < 1 {
            return Err(Error::InvalidArgument("ambient dimension must be >= 1".into()));
        }
        Self::with_basis(Operator::identity(ambient_dim), dims, &Tolerance::default())
    }

    /// Filtration along the columns of a unitary `basis`.
    pub fn with_basis(basis: Operator<T>, dims: Vec<usize>, tol: &Tolerance<T>) -> Result<Self> {
        let d = basis.dim_in();
        if !basis.is_square() {
            return Err(Error::NotSquare {
                rows: basis.dim_out(),
                cols: d,
            });
        }
        let defect = (&basis.dagger() * &basis).distance(&Operator::identity(d));
        if defect > tol.scaled(T::of_usize(d)) {
            return Err(Error::InvalidArgument(format!(
                "filtration basis is not orthonormal (defect {defect})"
            )));
        }
        if dims.is_empty() || dims[0] < 1 || dims.windows(2).any(|w| w[0] >= w[1]) || dims[dims.len() - 1] > d {
            return Err(Error::InvalidArgument(format!(
                "dims {dims:?} must increase strictly within 1..={d}"
            )));
        }
        Ok(Self {
            ambient_dim: d,
            dims,
            basis,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn basis(&self) -> &Operator<T> {
        &self.basis
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.dims.contains(&n) {
            Ok(())
        } else {
            Err(Error::NotInFiltration { n })
        }
    }

    /// The `D x n` isometry onto `H_n`.
    pub fn isometry(&self, n: usize) -> Result<Operator<T>> {
        self.check(n)?;
        Ok(Operator::from_matrix(self.basis.matrix().columns(0, n).into_owned()))
    }

    /// Orthoprojection `P_n` onto `H_n`.
    pub fn projection(&self, n: usize) -> Result<Operator<T>> {
        let v = self.isometry(n)?;
        Ok(&v * &v.dagger())
    }

    /// `P̂_n = P_n □ P_n`.
    pub fn lifted_projection(&self, n: usize) -> Result<SuperOperator<T>> {
        let p = self.projection(n)?;
        sandwich(&p, &p)
    }
}

/// `P̂ = P□P` for an orthoprojection `P`.
pub fn lift_projection<T: Real>(p: &Operator<T>, tol: &Tolerance<T>) -> Result<SuperOperator<T>> {
    if !p.is_square() {
        return Err(Error::NotSquare {
            rows: p.dim_out(),
            cols: p.dim_in(),
        });
    }
    let herm = p.hermiticity_defect();
    let idem = (p * p).distance(p);
    let defect = herm.max(idem);
    if defect > tol.scaled(p.frobenius_norm()) {
        return Err(Error::NotProjection {
            defect: defect.as_f64(),
        });
    }
    sandwich(p, p)
}

/// Objects that can be compressed along a filtration.
pub trait Compressible<T: Real>: Clone {
    fn compress_to(&self, f: &Filtration<T>, n: usize) -> Result<Self>;
    fn distance_to(&self, other: &Self) -> T;
    /// Norm used for boundedness: operator norm for operators, the induced
    /// Hilbert–Schmidt norm for superoperators.
    fn bound_norm(&self) -> T;
}

impl<T: Real> Compressible<T> for Operator<T> {
    fn compress_to(&self, f: &Filtration<T>, n: usize) -> Result<Self> {
        if self.dim_in() != f.ambient_dim || self.dim_out() != f.ambient_dim {
            return Err(Error::DimensionMismatch("operator does not live on the ambient space".into()));
        }
        let p = f.projection(n)?;
        Ok(&(&p * self) * &p)
    }

    fn distance_to(&self, other: &Self) -> T {
        self.distance(other)
    }

    fn bound_norm(&self) -> T {
        self.operator_norm()
    }
}

impl<T: Real> Compressible<T> for SuperOperator<T> {
    fn compress_to(&self, f: &Filtration<T>, n: usize) -> Result<Self> {
        compress(self, f, n)
    }

    fn distance_to(&self, other: &Self) -> T {
        self.distance(other)
    }

    fn bound_norm(&self) -> T {
        crate::operator::singular_values(self.matrix())
            .into_iter()
            .fold(T::zero(), |a, b| a.max(b))
    }
}

/// `Γ_n = P̂_n Γ P̂_n`, zero-padded to the ambient shape.
pub fn compress<T: Real>(g: &SuperOperator<T>, f: &Filtration<T>, n: usize) -> Result<SuperOperator<T>> {
    if !g.is_endo() || g.dim_in() != f.ambient_dim {
        return Err(Error::DimensionMismatch(
            "superoperator does not act on the ambient space".into(),
        ));
    }
    let ph = f.lifted_projection(n)?;
    ph.compose(g)?.compose(&ph)
}

/// `Γ_n` as a map on `L(H_n)` in the filtration basis.
pub fn restrict<T: Real>(g: &SuperOperator<T>, f: &Filtration<T>, n: usize) -> Result<SuperOperator<T>> {
    crate::superop::conjugate_by_isometry(g, &f.isometry(n)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncationRow<T: Real> {
    pub n: usize,
    /// `‖exp(t𝓛_n)P̂_nρ − exp(t𝓛)ρ‖₁`.
    pub error: T,
    /// `exp(t𝓛_n)P̂_n` is CP.
    pub truncated_cp: bool,
    pub truncated_choi_min_eig: T,
}

pub fn truncation_study<T: Real>(
    l: &SuperOperator<T>,
    f: &Filtration<T>,
    t: T,
    rho: &Operator<T>,
    tol: &Tolerance<T>,
) -> Result<Vec<TruncationRow<T>>> {
    if rho.dim_in() != f.ambient_dim || rho.dim_out() != f.ambient_dim {
        return Err(Error::DimensionMismatch("state does not live on the ambient space".into()));
    }
    let v = is_dcp(l, tol)?;
    if !v.is_dcp {
        return Err(Error::NotDcp {
            min_eigenvalue: v.compressed_choi_min_eig.as_f64(),
        });
    }
    let full = exp_generator(l, t).apply(rho);
    f.dims
        .iter()
        .map(|&n| {
            let ln = compress(l, f, n)?;
            let prop = exp_generator(&ln, t).compose(&f.lifted_projection(n)?)?;
            let cp = is_cp(&prop, tol);
            Ok(TruncationRow {
                n,
                error: trace_norm(&(&prop.apply(rho) - &full)),
                truncated_cp: cp.psd,
                truncated_choi_min_eig: cp.min_eigenvalue,
            })
        })
        .collect()
}

/// `(n, value_n)` pairs with `P̂_n`-invariant values.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptedSequence<T: Real, V> {
    filtration: Filtration<T>,
    items: Vec<(usize, V)>,
}

impl<T: Real, V: Compressible<T>> AdaptedSequence<T, V> {
    /// Checks that each value is fixed by compression to its own level.
    pub fn new(filtration: Filtration<T>, items: Vec<(usize, V)>, tol: &Tolerance<T>) -> Result<Self> {
        if items.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidArgument("levels must increase strictly".into()));
        }
        for (n, v) in &items {
            let c = v.compress_to(&filtration, *n)?;
            if c.distance_to(v) > tol.atol.max(tol.scaled(v.bound_norm())) {
                return Err(Error::NotAdapted { n: *n });
            }
        }
        Ok(Self { filtration, items })
    }

    /// `value_n = compress(value, n)` for every level.
    pub fn from_compressions(filtration: Filtration<T>, value: &V) -> Result<Self> {
        let items = filtration
            .dims
            .iter()
            .map(|&n| Ok((n, value.compress_to(&filtration, n)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { filtration, items })
    }

    pub fn items(&self) -> &[(usize, V)] {
        &self.items
    }

    pub fn filtration(&self) -> &Filtration<T> {
        &self.filtration
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction<T: Real, V> {
    /// The last element, standing in for the limit.
    pub limit: V,
    pub norms: Vec<(usize, T)>,
    /// Largest `‖compress(limit, n) − value_n‖` over levels.
    pub consistency_defect: T,
}

/// Returns the top element of a projective, norm-bounded sequence after
/// checking both properties.
pub fn projective_reconstruction<T: Real, V: Compressible<T>>(
    s: &AdaptedSequence<T, V>,
    norm_bound: T,
    tol: &Tolerance<T>,
) -> Result<Reconstruction<T, V>> {
    let items = &s.items;
    let last = items
        .last()
        .ok_or_else(|| Error::InvalidArgument("empty sequence".into()))?;
    let mut norms = Vec::with_capacity(items.len());
    for (n, v) in items {
        let norm = v.bound_norm();
        if norm > norm_bound * (T::one() + tol.rtol) + tol.atol {
            return Err(Error::NormBoundViolated {
                n: *n,
                norm: norm.as_f64(),
                bound: norm_bound.as_f64(),
            });
        }
        norms.push((*n, norm));
    }
    for (j, (m, vm)) in items.iter().enumerate() {
        for (n, vn) in &items[..j] {
            let defect = vm.compress_to(&s.filtration, *n)?.distance_to(vn);
            if defect > tol.atol.max(tol.scaled(vn.bound_norm())) {
                return Err(Error::NotProjective {
                    n: *n,
                    m: *m,
                    defect: defect.as_f64(),
                });
            }
        }
    }
    let limit = last.1.clone();
    let mut worst = T::zero();
    for (n, v) in items {
        worst = worst.max(limit.compress_to(&s.filtration, *n)?.distance_to(v));
    }
    Ok(Reconstruction {
        limit,
        norms,
        consistency_defect: worst,
    })
}

/// `A_n = diag(1, 2, …, n, 0, …, 0)`: projective with `‖A_n‖ = n`.
pub fn diverging_diagonal_sequence<T: Real>(ambient_dim: usize) -> Result<AdaptedSequence<T, Operator<T>>> {
    let f = Filtration::standard(ambient_dim, (1..=ambient_dim).collect())?;
    let items = (1..=ambient_dim)
        .map(|n| {
            let diag: Vec<T> = (0..ambient_dim)
                .map(|i| if i < n { T::of_usize(i + 1) } else { T::zero() })
                .collect();
            (n, Operator::diag(&diag))
        })
        .collect();
    AdaptedSequence::new(f, items, &Tolerance::default())
}
