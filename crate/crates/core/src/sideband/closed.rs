//! Closed-form sideband amplitudes, used to cross-check the direct solves.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

use super::{HarmonicCoefficients, SidebandBlock};
use crate::params::DriveConfig;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Complex value with a first derivative carried alongside (forward mode).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual {
    pub v: Complex64,
    pub d: Complex64,
}

impl Dual {
    pub fn constant(v: Complex64) -> Self {
        Dual { v, d: Complex64::new(0.0, 0.0) }
    }

    pub fn new(v: Complex64, d: Complex64) -> Self {
        Dual { v, d }
    }
}

impl From<Complex64> for Dual {
    fn from(v: Complex64) -> Self {
        Dual::constant(v)
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, o: Dual) -> Dual {
        Dual::new(self.v + o.v, self.d + o.d)
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, o: Dual) -> Dual {
        Dual::new(self.v - o.v, self.d - o.d)
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, o: Dual) -> Dual {
        Dual::new(self.v * o.v, self.d * o.v + self.v * o.d)
    }
}

impl Div for Dual {
    type Output = Dual;
    fn div(self, o: Dual) -> Dual {
        Dual::new(self.v / o.v, (self.d * o.v - self.v * o.d) / (o.v * o.v))
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        Dual::new(-self.v, -self.d)
    }
}

/// Arithmetic needed by the closed forms.
pub trait Scalar:
    Copy + From<Complex64> + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self>
{
}

impl Scalar for Complex64 {}
impl Scalar for Dual {}

/// h₁±, h₂±, h₃± as generic scalars.
struct FirstOrderH<T> {
    h1: (T, T),
    h2: (T, T),
    h3: (T, T),
}

fn a1m_generic<T: Scalar>(h: FirstOrderH<T>, hc: &HarmonicCoefficients, dc: &DriveConfig) -> T {
    let k = |c: Complex64| T::from(c);
    let l2 = k(Complex64::new(hc.lambda * hc.lambda, 0.0));
    let g = hc.g_eff;
    let g2 = k(Complex64::new(g.norm_sqr(), 0.0));
    let u1p = h.h2.0 * h.h3.0 + l2;
    let u1m = h.h2.1 * h.h3.1 + l2;
    let pi = h.h3.1 * u1p - h.h3.0 * u1m;
    let den = h.h1.0 * h.h1.1 * u1p * u1m + k(2.0 * I * hc.delta) * g2 * pi;
    let e = |phi: f64| Complex64::from_polar(1.0, -phi);
    let probe = (h.h1.1 * u1p * u1m + g2 * pi) * k(Complex64::new(dc.eps_p, 0.0));
    let mr1 = k(I * g) * h.h1.1 * h.h3.0 * u1m * k(dc.eps_mech[0] * e(dc.mixing_phase(0)));
    let mr2 = k(g) * h.h1.1 * u1m * k(hc.lambda * dc.eps_mech[1] * e(dc.mixing_phase(1)));
    (probe + mr1 + mr2) / den * k(e(dc.phi_pl()))
}

/// Closed form of A₁⁻ (probe, MR₁-drive and MR₂-drive contributions).
pub fn a1m_closed(hc: &HarmonicCoefficients, dc: &DriveConfig) -> Complex64 {
    let h = FirstOrderH { h1: hc.h[0], h2: hc.h[1], h3: hc.h[2] };
    a1m_generic(h, hc, dc)
}

/// A₁⁻ together with dA₁⁻/dξ (every first-order h has dh/dξ = −i).
pub fn a1m_closed_dual(hc: &HarmonicCoefficients, dc: &DriveConfig) -> Dual {
    let dd = Complex64::new(0.0, -1.0);
    let lift = |p: (Complex64, Complex64)| (Dual::new(p.0, dd), Dual::new(p.1, dd));
    let h = FirstOrderH { h1: lift(hc.h[0]), h2: lift(hc.h[1]), h3: lift(hc.h[2]) };
    a1m_generic(h, hc, dc)
}

/// Closed form of A₂⁻ from the first-order amplitudes.
///
/// The (h₁⁻/G*) factor comes from eliminating B₁⁻ + B₁⁺* with the δc†
/// first-order equation, so the form is undefined at G = 0 (`None`).
pub fn a2m_closed(hc: &HarmonicCoefficients, g0: f64, first: &SidebandBlock) -> Option<Complex64> {
    let g = hc.g_eff;
    if g.norm() == 0.0 {
        return None;
    }
    let (h4p, h4m) = hc.h[3];
    let (u2p, u2m) = hc.u2;
    let gam = hc.gamma;
    let den = h4p * h4m * u2p * u2m + 2.0 * I * hc.delta * g.norm_sqr() * gam;
    let ratio = hc.h[0].1 / g.conj();
    let k1 = g0 * (-I * hc.xi * g * gam - h4m * u2p * u2m * ratio) / den;
    let k2 = g0 * g * g * gam * ratio / den;
    Some(k1 * first.a_m * first.a_p + k2 * first.a_p * first.a_p)
}
