//! Closed-form scalar products between coherent states and their
//! first-order ladder images. No Fock-space truncation is involved.

use nalgebra::{Complex, ComplexField};

use crate::engine::Ket;
use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// `(k₀ + k₊·a† + k₋·a)|β⟩` for a coherent state `|β⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderKet<T: Real> {
    pub amplitude: Complex<T>,
    pub constant: Complex<T>,
    pub create: Complex<T>,
    pub annihilate: Complex<T>,
}

fn cplx<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

impl<T: Real> LadderKet<T> {
    pub fn coherent(amplitude: Complex<T>) -> Self {
        let zero = cplx(T::zero(), T::zero());
        Self {
            amplitude,
            constant: cplx(T::one(), T::zero()),
            create: zero,
            annihilate: zero,
        }
    }

    /// `|σα⟩` for real `α` and branch sign `σ = ±1`.
    pub fn branch(sign: T, alpha: T) -> Self {
        Self::coherent(cplx(sign * alpha, T::zero()))
    }

    /// `∂_α|σα⟩ = (σa† − α)|σα⟩`.
    pub fn amplitude_derivative(sign: T, alpha: T) -> Self {
        Self {
            amplitude: cplx(sign * alpha, T::zero()),
            constant: cplx(-alpha, T::zero()),
            create: cplx(sign, T::zero()),
            annihilate: cplx(T::zero(), T::zero()),
        }
    }

    /// `D(iε)|σα⟩ = e^{iεσα}|σα + iε⟩`.
    pub fn displaced(sign: T, alpha: T, epsilon: T) -> Self {
        let phase = phase(epsilon * sign * alpha);
        Self {
            constant: phase,
            ..Self::coherent(cplx(sign * alpha, epsilon))
        }
    }

    /// `∂_ε D(iε)|σα⟩ = i(a + a†)·D(iε)|σα⟩`.
    pub fn displaced_derivative(sign: T, alpha: T, epsilon: T) -> Self {
        let k = phase(epsilon * sign * alpha) * cplx(T::zero(), T::one());
        Self {
            amplitude: cplx(sign * alpha, epsilon),
            constant: cplx(T::zero(), T::zero()),
            create: k,
            annihilate: k,
        }
    }
}

fn phase<T: Real>(theta: T) -> Complex<T> {
    cplx(theta.cos(), theta.sin())
}

/// `⟨β|γ⟩ = exp(−|β|²/2 − |γ|²/2 + β*γ)`.
pub fn coherent_inner<T: Real>(beta: Complex<T>, gamma: Complex<T>) -> Complex<T> {
    let half = lit::<T>(0.5);
    let exponent =
        beta.conj() * gamma - cplx((beta.norm_sqr() + gamma.norm_sqr()) * half, T::zero());
    ComplexField::exp(exponent)
}

impl<T: Real> Ket<T> for LadderKet<T> {
    /// Normal-orders `P†Q` with `a·a† = a†·a + 1`, then lets `a†` act to the
    /// left (`β*`) and `a` to the right (`γ`).
    fn overlap(&self, other: &Self) -> Complex<T> {
        let (b, g) = (self.amplitude.conj(), other.amplitude);
        let (p0, p1, p2) = (
            self.constant.conj(),
            self.create.conj(),
            self.annihilate.conj(),
        );
        let (q0, q1, q2) = (other.constant, other.create, other.annihilate);
        let one = cplx(T::one(), T::zero());
        let poly = p0 * q0
            + p0 * q1 * b
            + p0 * q2 * g
            + p1 * q0 * g
            + p1 * q1 * (b * g + one)
            + p1 * q2 * g * g
            + p2 * q0 * b
            + p2 * q1 * b * b
            + p2 * q2 * b * g;
        poly * coherent_inner(self.amplitude, other.amplitude)
    }
}

/// Which parameter moves a coherent ket.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Motion {
    /// `|a⟩` with `a = σα`, differentiated with respect to `α`.
    Amplitude,
    /// `D(iε)|a⟩` at `ε = 0`, differentiated with respect to `ε`.
    Displacement,
}

fn ket<T: Real>(a: T, order: u8, motion: Motion) -> Result<LadderKet<T>> {
    let sign = if a < T::zero() { -T::one() } else { T::one() };
    let alpha = a.abs();
    match (order, motion) {
        (0, _) => Ok(LadderKet::branch(sign, alpha)),
        (1, Motion::Amplitude) => Ok(LadderKet::amplitude_derivative(sign, alpha)),
        (1, Motion::Displacement) => Ok(LadderKet::displaced_derivative(sign, alpha, T::zero())),
        (k, _) => Err(Error::UnsupportedDerivativeOrder(k)),
    }
}

/// `⟨∂^{da} a|∂^{db} b⟩` for real signed amplitudes `a`, `b`.
pub fn coherent_overlap<T: Real>(a: T, b: T, da: u8, db: u8, motion: Motion) -> Result<Complex<T>> {
    Ok(ket(a, da, motion)?.overlap(&ket(b, db, motion)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(z: Complex<f64>, re: f64, im: f64) -> bool {
        (z.re - re).abs() < 1e-14 && (z.im - im).abs() < 1e-14
    }

    #[test]
    fn plain_overlaps() {
        let al = 0.8;
        assert!(close(
            coherent_overlap(al, al, 0, 0, Motion::Amplitude).unwrap(),
            1.0,
            0.0
        ));
        let s = (-2.0 * al * al).exp();
        assert!(close(
            coherent_overlap(al, -al, 0, 0, Motion::Amplitude).unwrap(),
            s,
            0.0
        ));
    }

    #[test]
    fn amplitude_derivative_overlaps() {
        let al = 1.0;
        let s = (-2.0f64).exp();
        let dd = coherent_overlap(al, -al, 1, 1, Motion::Amplitude).unwrap();
        assert!(close(dd, s * (4.0 * al * al - 1.0), 0.0));
        assert!(close(
            coherent_overlap(al, al, 1, 1, Motion::Amplitude).unwrap(),
            1.0,
            0.0
        ));
        assert!(close(
            coherent_overlap(al, -al, 0, 1, Motion::Amplitude).unwrap(),
            -2.0 * s * al,
            0.0
        ));
        assert!(close(
            coherent_overlap(al, al, 0, 1, Motion::Amplitude).unwrap(),
            0.0,
            0.0
        ));
    }

    #[test]
    fn displacement_derivative_overlaps() {
        let al = 1.3;
        let s = (-2.0 * al * al).exp();
        assert!(close(
            coherent_overlap(al, al, 0, 1, Motion::Displacement).unwrap(),
            0.0,
            2.0 * al
        ));
        assert!(close(
            coherent_overlap(-al, -al, 0, 1, Motion::Displacement).unwrap(),
            0.0,
            -2.0 * al
        ));
        let dd = coherent_overlap(al, al, 1, 1, Motion::Displacement).unwrap();
        assert!((dd.re - (1.0 + 4.0 * al * al)).abs() < 1e-13);
        assert!(close(
            coherent_overlap(al, -al, 1, 1, Motion::Displacement).unwrap(),
            s,
            0.0
        ));
    }

    #[test]
    fn second_order_rejected() {
        assert_eq!(
            coherent_overlap(1.0, 1.0, 2, 0, Motion::Amplitude),
            Err(Error::UnsupportedDerivativeOrder(2))
        );
    }

    #[test]
    fn displaced_kets_are_unit_norm() {
        let k = LadderKet::displaced(-1.0, 0.7, 0.4);
        assert!(close(k.overlap(&k), 1.0, 0.0));
    }
}
