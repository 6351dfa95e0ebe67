//! Seeded samplers: Ginibre matrices, Haar unitaries, random states, random
//! CP maps and random dCP generators.
//!
//! All samplers draw from a ChaCha8 stream so that a seed pins the output
//! bit-for-bit across platforms.

use nalgebra::{DMatrix, DVector};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::gksl::GkslPresentation;
use crate::operator::{traceless_projection, Operator};
use crate::scalar::{cabs, real, Real, C};
use crate::superop::SuperOperator;

pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Matrix with i.i.d. standard complex normal entries (`E|z|² = 1`).
pub fn complex_gaussian<T: Real>(rows: usize, cols: usize, rng: &mut impl Rng) -> DMatrix<C<T>> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    DMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C::new(T::lit(re * s), T::lit(im * s))
    })
}

pub fn random_unit_vector<T: Real>(d: usize, rng: &mut impl Rng) -> DVector<C<T>> {
    let v = complex_gaussian::<T>(d, 1, rng).column(0).into_owned();
    let n = real(v.norm());
    v.map(|z| z / n)
}

/// Haar-distributed unitary from the QR decomposition of a Ginibre matrix,
/// with the phases of `R`'s diagonal absorbed into `Q`.
pub fn haar_unitary<T: Real>(d: usize, rng: &mut impl Rng) -> Result<Operator<T>> {
    if d < 1 {
        return Err(Error::InvalidArgument("unitary dimension must be >= 1".into()));
    }
    let z = complex_gaussian::<T>(d, d, rng);
    let qr = z.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..d {
        let rjj = r[(j, j)];
        let n = cabs(rjj);
        let phase = if n > T::zero() { rjj / real(n) } else { C::new(T::one(), T::zero()) };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    Ok(Operator::from_matrix(q))
}

pub fn random_haar_unitary<T: Real>(d: usize, seed: u64) -> Result<Operator<T>> {
    haar_unitary(d, &mut rng_from_seed(seed))
}

/// Random hermitian matrix `(Z + Z†)/2`.
pub fn random_hermitian<T: Real>(d: usize, rng: &mut impl Rng) -> Operator<T> {
    let z = complex_gaussian::<T>(d, d, rng);
    let half = real(T::lit(0.5));
    Operator::from_matrix((&z + z.adjoint()).map(|x| x * half))
}

/// Random positive semidefinite matrix `Z Z†` with `Z` of shape `d x rank`.
pub fn random_psd<T: Real>(d: usize, rank: usize, rng: &mut impl Rng) -> Operator<T> {
    let z = complex_gaussian::<T>(d, rank, rng);
    Operator::from_matrix(&z * z.adjoint())
}

/// Full-rank density matrix (Wishart, normalized to unit trace).
pub fn random_density_matrix<T: Real>(d: usize, rng: &mut impl Rng) -> Operator<T> {
    let p = random_psd::<T>(d, d, rng);
    let tr = p.trace().re;
    p.scale_real(T::one() / tr)
}

pub fn random_superoperator<T: Real>(d_in: usize, d_out: usize, rng: &mut impl Rng) -> SuperOperator<T> {
    SuperOperator::from_matrix(d_in, d_out, complex_gaussian(d_out * d_out, d_in * d_in, rng))
        .expect("shape is consistent by construction")
}

/// Random Kraus operators, each `d_out x d_in`, scaled by `1/sqrt(count)`.
pub fn random_kraus_ops<T: Real>(d_in: usize, d_out: usize, count: usize, rng: &mut impl Rng) -> Vec<Operator<T>> {
    let s = T::one() / T::of_usize(count.max(1)).sqrt();
    (0..count)
        .map(|_| Operator::from_matrix(complex_gaussian(d_out, d_in, rng)).scale_real(s))
        .collect()
}

pub fn random_cp_map<T: Real>(d_in: usize, d_out: usize, count: usize, rng: &mut impl Rng) -> SuperOperator<T> {
    let ops = random_kraus_ops(d_in, d_out, count, rng);
    SuperOperator::kraus_sum(&ops).expect("kraus ops share dims")
}

/// Random minimal GKSL triple: traceless jump operators, hermitian `G`,
/// traceless hermitian `H`.
pub fn random_minimal_presentation<T: Real>(d: usize, jumps: usize, rng: &mut impl Rng) -> GkslPresentation<T> {
    let psi = random_traceless_cp(d, jumps, rng);
    let g = random_hermitian(d, rng);
    let h = traceless_projection(&random_hermitian(d, rng)).expect("square");
    GkslPresentation::new_unchecked(psi, g, h)
}

/// Random minimal triple that generates a trace-nonincreasing semigroup:
/// `G = Ψ†(Id)/2 + K` with `K ≥ 0`. Pass `slack_rank = 0` for trace preservation.
pub fn random_tni_presentation<T: Real>(
    d: usize,
    jumps: usize,
    slack_rank: usize,
    rng: &mut impl Rng,
) -> GkslPresentation<T> {
    let psi = random_traceless_cp(d, jumps, rng);
    let half = T::lit(0.5);
    let mut g = psi.adjoint().apply(&Operator::identity(d)).scale_real(half);
    if slack_rank > 0 {
        g = &g + &random_psd(d, slack_rank, rng).scale_real(T::lit(0.25));
    }
    let g = crate::operator::hermitian_split(&g).expect("square").hermitian_part;
    let h = traceless_projection(&random_hermitian(d, rng)).expect("square");
    GkslPresentation::new_unchecked(psi, g, h)
}

fn random_traceless_cp<T: Real>(d: usize, jumps: usize, rng: &mut impl Rng) -> SuperOperator<T> {
    if jumps == 0 {
        return SuperOperator::zero(d, d);
    }
    let ops: Vec<Operator<T>> = random_kraus_ops(d, d, jumps, rng)
        .iter()
        .map(|a| traceless_projection(a).expect("square"))
        .collect();
    SuperOperator::kraus_sum(&ops).expect("kraus ops share dims")
}

/// Random complex scalar with standard normal parts.
pub fn random_scalar<T: Real>(rng: &mut impl Rng) -> C<T> {
    let z = complex_gaussian::<T>(1, 1, rng)[(0, 0)];
    if z.is_zero() {
        C::new(T::one(), T::zero())
    } else {
        z
    }
}
