//! Named maps, generators and schedules used as a regression corpus.

use crate::evolution::GeneratorSchedule;
use crate::gksl::GkslPresentation;
use crate::operator::Operator;
use crate::random::{random_cp_map, random_minimal_presentation, random_tni_presentation, rng_from_seed};
use crate::scalar::{cplx, Real};
use crate::superop::{sandwich, SuperOperator};

/// Pauli matrices, `0` being the identity.
pub fn pauli<T: Real>(k: usize) -> Operator<T> {
    let z = cplx::<T>(0.0, 0.0);
    let one = cplx::<T>(1.0, 0.0);
    let i = cplx::<T>(0.0, 1.0);
    let entries = match k {
        0 => [one, z, z, one],
        1 => [z, one, one, z],
        2 => [z, -i, i, z],
        3 => [one, z, z, -one],
        _ => panic!("pauli index {k} out of range"),
    };
    Operator::from_row_slice(2, 2, &entries)
}

pub fn transpose_map<T: Real>(d: usize) -> SuperOperator<T> {
    SuperOperator::transpose_map(d)
}

pub fn identity_map<T: Real>(d: usize) -> SuperOperator<T> {
    SuperOperator::identity(d)
}

/// `ρ ↦ (1 − p)ρ + p·Tr(ρ)·Id/d`.
pub fn depolarizing_channel<T: Real>(d: usize, p: T) -> SuperOperator<T> {
    let keep = SuperOperator::identity(d).scale_real(T::one() - p);
    let mix = SuperOperator::trace_to_identity(d).scale_real(p / T::of_usize(d));
    keep.add(&mix).expect("same dims")
}

/// `ρ ↦ (1 − p)ρ + p·diag(ρ)`.
pub fn dephasing_channel<T: Real>(d: usize, p: T) -> SuperOperator<T> {
    let keep = SuperOperator::identity(d).scale_real(T::one() - p);
    keep.add(&crate::cp::complete_dephasing::<T>(d).scale_real(p))
        .expect("same dims")
}

/// Qubit amplitude damping channel with decay probability `γ`.
pub fn amplitude_damping_channel<T: Real>(gamma: T) -> SuperOperator<T> {
    let k0 = Operator::diag(&[T::one(), (T::one() - gamma).sqrt()]);
    let k1 = Operator::dyad(2, 2, 0, 1).scale_real(gamma.sqrt());
    SuperOperator::kraus_sum(&[k0, k1]).expect("qubit kraus ops")
}

/// Minimal presentation of qubit amplitude damping at rate `γ`:
/// `Ψ = √γ|0⟩⟨1| □ (…)†`, `G = γ|1⟩⟨1|/2`, `H = 0`.
pub fn amplitude_damping_presentation<T: Real>(gamma: T) -> GkslPresentation<T> {
    let a = Operator::dyad(2, 2, 0, 1).scale_real(gamma.sqrt());
    let psi = sandwich(&a, &a.dagger()).expect("qubit");
    let g = Operator::diag(&[T::zero(), gamma * T::lit(0.5)]);
    GkslPresentation::new_unchecked(psi, g, Operator::zeros(2, 2))
}

pub fn amplitude_damping_generator<T: Real>(gamma: T) -> SuperOperator<T> {
    amplitude_damping_presentation(gamma).generator()
}

/// `ρ ↦ rate·(Tr(ρ)·Id/d − ρ)`.
pub fn depolarizing_generator<T: Real>(d: usize, rate: T) -> SuperOperator<T> {
    SuperOperator::trace_to_identity(d)
        .scale_real(T::one() / T::of_usize(d))
        .sub(&SuperOperator::identity(d))
        .expect("same dims")
        .scale_real(rate)
}

/// `ρ ↦ rate·(diag(ρ) − ρ)`.
pub fn dephasing_generator<T: Real>(d: usize, rate: T) -> SuperOperator<T> {
    crate::cp::complete_dephasing::<T>(d)
        .sub(&SuperOperator::identity(d))
        .expect("same dims")
        .scale_real(rate)
}

/// `ρ ↦ −i[H, ρ]`.
pub fn commutator_generator<T: Real>(h: &Operator<T>) -> SuperOperator<T> {
    let d = h.dim_in();
    GkslPresentation::new_unchecked(SuperOperator::zero(d, d), Operator::zeros(d, d), h.clone()).generator()
}

/// `Xᵀ − X`: hermitian Choi matrix, not dCP.
pub fn transpose_minus_identity<T: Real>(d: usize) -> SuperOperator<T> {
    SuperOperator::transpose_map(d)
        .sub(&SuperOperator::identity(d))
        .expect("same dims")
}

pub fn random_cp<T: Real>(d: usize, kraus: usize, seed: u64) -> SuperOperator<T> {
    random_cp_map(d, d, kraus, &mut rng_from_seed(seed))
}

pub fn random_dcp<T: Real>(d: usize, jumps: usize, seed: u64) -> SuperOperator<T> {
    random_minimal_presentation(d, jumps, &mut rng_from_seed(seed)).generator()
}

/// Random minimal presentation of a trace-preserving generator.
pub fn random_tp_presentation<T: Real>(d: usize, jumps: usize, seed: u64) -> GkslPresentation<T> {
    random_tni_presentation(d, jumps, 0, &mut rng_from_seed(seed))
}

/// Embeds a presentation on `C^n` into `C^D` along the first `n` basis
/// vectors: `Ψ ↦ V Ψ(V†·V) V†`, `G ↦ V G V†`, `H ↦ V H V†`.
pub fn embedded_presentation<T: Real>(p: &GkslPresentation<T>, ambient_dim: usize) -> GkslPresentation<T> {
    let n = p.dim();
    assert!(n <= ambient_dim, "block larger than ambient space");
    let v = Operator::from_fn(ambient_dim, n, |i, j| if i == j { cplx(1.0, 0.0) } else { cplx(0.0, 0.0) });
    let vd = v.dagger();
    let psi = SuperOperator::from_map(ambient_dim, ambient_dim, |x| &(&v * &p.psi.apply(&(&(&vd * x) * &v))) * &vd)
        .expect("square");
    let g = &(&v * &p.g) * &vd;
    let h = &(&v * &p.h) * &vd;
    GkslPresentation::new_unchecked(psi, g, h)
}

/// Random dCP generator on `C^D` acting only on the first `block` levels.
pub fn block_dcp<T: Real>(ambient_dim: usize, block: usize, jumps: usize, seed: u64) -> SuperOperator<T> {
    let p = random_minimal_presentation(block, jumps, &mut rng_from_seed(seed));
    embedded_presentation(&p, ambient_dim).generator()
}

/// Driven, damped qubit on `(−10, 10)`:
/// `𝓛(t) = −i[cos(2t)σx + sin(2t)σz, ·] + amplitude damping(1/2)`.
/// The generators at different times do not commute; the schedule is
/// trace preserving and Lipschitz with constant 8.
pub fn driven_qubit_schedule<T: Real>() -> GeneratorSchedule<T> {
    let damp = amplitude_damping_generator::<T>(T::lit(0.5));
    let (sx, sz) = (pauli::<T>(1), pauli::<T>(3));
    GeneratorSchedule::from_fn(2, T::lit(-10.0), T::lit(10.0), Some(T::lit(8.0)), move |t: T| {
        let two_t = t + t;
        let h = &sx.scale_real(two_t.cos()) + &sz.scale_real(two_t.sin());
        damp.add(&commutator_generator(&h))
    })
    .expect("valid interval")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gksl::{is_dcp, trace_condition, TraceClass};
    use crate::operator::Tolerance;
    use crate::superop::is_cp;

    #[test]
    fn channels_are_cp_and_trace_preserving() {
        let tol = Tolerance::<f64>::default();
        for m in [
            identity_map::<f64>(3),
            depolarizing_channel(3, 0.3),
            dephasing_channel(2, 0.5),
            amplitude_damping_channel(0.2),
        ] {
            assert!(is_cp(&m, &tol).psd);
            let dual = m.adjoint().apply(&Operator::identity(m.dim_in()));
            assert!(dual.distance(&Operator::identity(m.dim_in())) < 1e-14);
        }
        assert!(!is_cp(&transpose_map::<f64>(2), &tol).psd);
    }

    #[test]
    fn generators_classify() {
        let tol = Tolerance::<f64>::default();
        for l in [
            amplitude_damping_generator::<f64>(0.3),
            depolarizing_generator(3, 0.7),
            dephasing_generator(3, 0.2),
            commutator_generator(&pauli(2)),
            random_dcp(3, 2, 1),
        ] {
            let v = is_dcp(&l, &tol).unwrap();
            assert!(v.is_dcp);
            let p = v.extracted.unwrap();
            assert!(p.generator().distance(&l) < 1e-12);
        }
        for l in [
            amplitude_damping_generator::<f64>(0.3),
            depolarizing_generator(3, 0.7),
            dephasing_generator(3, 0.2),
        ] {
            let p = is_dcp(&l, &tol).unwrap().extracted.unwrap();
            assert_eq!(trace_condition(&p, &tol).class, TraceClass::Preserving);
        }
        assert!(!is_dcp(&transpose_minus_identity::<f64>(2), &tol).unwrap().is_dcp);
    }

    #[test]
    fn paulis_square_to_identity() {
        for k in 0..4 {
            let p = pauli::<f64>(k);
            assert!((&p * &p).distance(&Operator::identity(2)) < 1e-15);
        }
    }
}
