//! Linear stability of a steady state.
//!
//! The 6×6 fluctuation matrix acts on (δc, δc†, δb₁, δb₁†, δb₂, δb₂†). Its
//! characteristic polynomial is built by Faddeev–LeVerrier on a rescaled
//! copy; the verdict uses the Hurwitz leading principal minors and is
//! cross-checked against the spectrum from a complex Schur decomposition.

use nalgebra::{DMatrix, Matrix6};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{OmitError, Result};
use crate::params::SystemParams;
use crate::steady::SteadyState;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Imaginary residue of the characteristic coefficients tolerated before
/// the polynomial is declared inconsistent.
pub const IMAG_TOLERANCE: f64 = 1e-9;
/// Half-width of the marginal band on Re Υ, in units of κ.
pub const MARGINAL_BAND: f64 = 1e-6;

pub type CMatrix6 = Matrix6<Complex64>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluctuationMatrix {
    pub entries: CMatrix6,
    /// G = g c_s.
    pub g_eff: Complex64,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Matrix of the linearized fluctuation equations.
pub fn fluctuation_matrix(sp: &SystemParams, ss: &SteadyState) -> FluctuationMatrix {
    let g = ss.g_eff(sp);
    let gc = g.conj();
    let d = ss.delta_eff;
    let (k, l) = (sp.kappa, sp.lambda);
    let (w1, w2) = (sp.omega_m[0], sp.omega_m[1]);
    let (g1, g2) = (sp.gamma[0], sp.gamma[1]);
    let z = Complex64::new(0.0, 0.0);
    #[rustfmt::skip]
    let m = CMatrix6::from_row_slice(&[
        c(-k / 2.0, -d), z,              I * g,             I * g,            z,                z,
        z,               c(-k / 2.0, d), -I * gc,           -I * gc,          z,                z,
        I * gc,          I * g,          c(-g1 / 2.0, -w1), z,                c(0.0, -l),       z,
        -I * gc,         -I * g,         z,                 c(-g1 / 2.0, w1), z,                c(0.0, l),
        z,               z,              c(0.0, -l),        z,                c(-g2 / 2.0, -w2), z,
        z,               z,              z,                 c(0.0, l),        z,                c(-g2 / 2.0, w2),
    ]);
    FluctuationMatrix { entries: m, g_eff: g }
}

/// Alternative closed-form fluctuation matrix, kept for comparison.
pub fn literal_matrix(sp: &SystemParams, ss: &SteadyState) -> CMatrix6 {
    let g = ss.g_eff(sp);
    let gc = g.conj();
    let d = ss.delta_eff;
    let (k, l) = (sp.kappa, sp.lambda);
    let (w1, w2) = (sp.omega_m[0], sp.omega_m[1]);
    let (g1, g2) = (sp.gamma[0], sp.gamma[1]);
    let z = Complex64::new(0.0, 0.0);
    #[rustfmt::skip]
    let m = CMatrix6::from_row_slice(&[
        c(-k / 2.0, -d),   z,                I * g,      I * g,  z,          z,
        z,                 c(-k / 2.0, d),   I * gc,     I * gc, z,          z,
        c(-g1 / 2.0, -w1), z,                I * gc,     I * g,  c(0.0, -l), z,
        z,                 c(-g1 / 2.0, w1), I * g,      I * gc, z,          c(0.0, l),
        c(-g2 / 2.0, -w2), z,                c(0.0, -l), z,      z,          z,
        z,                 c(-g2 / 2.0, w2), z,          c(0.0, l), z,       z,
    ]);
    m
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntryDifference {
    pub row: usize,
    pub col: usize,
    #[serde(serialize_with = "crate::steady::ser_c")]
    pub derived: Complex64,
    #[serde(serialize_with = "crate::steady::ser_c")]
    pub literal: Complex64,
}

/// Entries where the derived and literal matrices differ.
pub fn matrix_differences(sp: &SystemParams, ss: &SteadyState) -> Vec<EntryDifference> {
    let a = fluctuation_matrix(sp, ss).entries;
    let b = literal_matrix(sp, ss);
    let scale = a.iter().chain(b.iter()).fold(0.0f64, |m, v| m.max(v.norm()));
    let mut out = Vec::new();
    for r in 0..6 {
        for col in 0..6 {
            if (a[(r, col)] - b[(r, col)]).norm() > 1e-14 * scale {
                out.push(EntryDifference { row: r, col, derived: a[(r, col)], literal: b[(r, col)] });
            }
        }
    }
    out
}

/// Characteristic coefficients C₁..C₆ of Υ⁶ + C₁Υ⁵ + … + C₆ together with the
/// scale ρ used internally (Ĉ_k = C_k / ρ^k).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CharPoly {
    pub coeffs: [f64; 6],
    pub scaled: [f64; 6],
    pub scale: f64,
    /// Largest discarded imaginary part, relative.
    pub max_imag: f64,
}

pub fn char_poly_coeffs(fm: &FluctuationMatrix) -> Result<CharPoly> {
    let rho = fm.entries.iter().fold(0.0f64, |m, v| m.max(v.norm()));
    if rho == 0.0 {
        return Ok(CharPoly { coeffs: [0.0; 6], scaled: [0.0; 6], scale: 1.0, max_imag: 0.0 });
    }
    let a = fm.entries.map(|v| v / rho);
    // Faddeev–LeVerrier: M_k = A M_{k-1} + c_{k-1} I, c_k = -tr(A M_k)/k
    let mut m = CMatrix6::zeros();
    let mut prev = Complex64::new(1.0, 0.0);
    let mut ch = [Complex64::new(0.0, 0.0); 6];
    for (k, slot) in ch.iter_mut().enumerate() {
        m = a * m + CMatrix6::identity() * prev;
        prev = -(a * m).trace() / (k as f64 + 1.0);
        *slot = prev;
    }
    let size = ch.iter().fold(1.0f64, |acc, v| acc.max(v.norm()));
    let max_imag = ch.iter().fold(0.0f64, |acc, v| acc.max(v.im.abs())) / size;
    log::trace!("characteristic polynomial: max relative imaginary residue {max_imag:e}");
    if max_imag > IMAG_TOLERANCE {
        return Err(OmitError::NumericalInconsistency(format!(
            "characteristic coefficients carry imaginary residue {max_imag:e}"
        )));
    }
    let mut scaled = [0.0; 6];
    let mut coeffs = [0.0; 6];
    for k in 0..6 {
        scaled[k] = ch[k].re;
        coeffs[k] = ch[k].re * rho.powi(k as i32 + 1);
    }
    Ok(CharPoly { coeffs, scaled, scale: rho, max_imag })
}

/// Leading principal minors Δ₁..Δ₆ of the Hurwitz matrix of
/// Υ⁶ + C₁Υ⁵ + … + C₆.
pub fn hurwitz_minors(c: &[f64; 6]) -> [f64; 6] {
    let a = |k: isize| -> f64 {
        match k {
            0 => 1.0,
            1..=6 => c[k as usize - 1],
            _ => 0.0,
        }
    };
    let mut out = [0.0; 6];
    for (n, slot) in out.iter_mut().enumerate() {
        let size = n + 1;
        let h = DMatrix::from_fn(size, size, |i, j| a(2 * j as isize - i as isize + 1));
        *slot = h.determinant();
    }
    out
}

/// The six closed-form stability inequalities, evaluated as written. Only the
/// first three coincide with Hurwitz minors; the others are carried for
/// comparison and do not decide stability.
pub fn literal_conditions(c: &[f64; 6]) -> [f64; 6] {
    let [c1, c2, c3, c4, c5, c6] = *c;
    [
        // C1 > 0
        c1,
        // C1 C2 - C3 > 0
        c1 * c2 - c3,
        // C1 C2 C3 + C1 C5 - C1² C4 - C3² > 0
        c1 * c2 * c3 + c1 * c5 - c1 * c1 * c4 - c3 * c3,
        // C1 C2 C3 C4 + C2 C6 (C1² + C3) + C1 C5 (C4 + C5)
        //   - C1² C4² - C1 C3 C6 - C3² C4 - C4² > 0
        c1 * c2 * c3 * c4 + c2 * c6 * (c1 * c1 + c3) + c1 * c5 * (c4 + c5)
            - c1 * c1 * c4 * c4
            - c1 * c3 * c6
            - c3 * c3 * c4
            - c4 * c4,
        // C1 C2 C3 C4 C5 + (C1² C2 - C2 C3 + C1 C3) C5 C6
        //   + (C3 C2 + C1 C4 - C1 C2² - C5) C5² - (C1 C2 C6 + C4 C5) C3² > 0
        c1 * c2 * c3 * c4 * c5
            + (c1 * c1 * c2 - c2 * c3 + c1 * c3) * c5 * c6
            + (c3 * c2 + c1 * c4 - c1 * c2 * c2 - c5) * c5 * c5
            - (c1 * c2 * c6 + c4 * c5) * c3 * c3,
        // C1 C2 C3 C4 C5 C6 + (C1 C4² - C1² C4² - C3² C4) C5 C6 + C2 C3 C5² C6
        //   - C1 C2 C3² C6² - C1 C3 C5 C6² - C5³ C6 > 0
        c1 * c2 * c3 * c4 * c5 * c6
            + (c1 * c4 * c4 - c1 * c1 * c4 * c4 - c3 * c3 * c4) * c5 * c6
            + c2 * c3 * c5 * c5 * c6
            - c1 * c2 * c3 * c3 * c6 * c6
            - c1 * c3 * c5 * c6 * c6
            - c5 * c5 * c5 * c6,
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RouthHurwitz {
    /// Hurwitz minors of the rescaled polynomial (same signs as unscaled).
    pub minors: [f64; 6],
    pub stable: bool,
    /// Literal inequalities evaluated on the unscaled coefficients.
    pub literal: [f64; 6],
    pub literal_stable: bool,
}

pub fn routh_hurwitz_stable(cp: &CharPoly) -> RouthHurwitz {
    let minors = hurwitz_minors(&cp.scaled);
    let literal = literal_conditions(&cp.coeffs);
    RouthHurwitz {
        minors,
        stable: minors.iter().all(|v| *v > 0.0),
        literal,
        literal_stable: literal.iter().all(|v| *v > 0.0),
    }
}

/// Spectrum of the fluctuation matrix via complex Schur decomposition.
pub fn eigenvalues(fm: &FluctuationMatrix) -> Result<Vec<Complex64>> {
    let schur = nalgebra::Schur::try_new(fm.entries, f64::EPSILON, 10_000).ok_or(OmitError::EigenNonConvergence)?;
    let (_, t) = schur.unpack();
    let ev: Vec<Complex64> = (0..6).map(|i| t[(i, i)]).collect();
    if ev.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(OmitError::EigenNonConvergence);
    }
    Ok(ev)
}

pub fn eigen_stable(fm: &FluctuationMatrix) -> Result<f64> {
    Ok(eigenvalues(fm)?.iter().map(|v| v.re).fold(f64::NEG_INFINITY, f64::max))
}

/// Roots of the monic polynomial Υ⁶ + C₁Υ⁵ + … + C₆ by Aberth–Ehrlich
/// iteration on the rescaled coefficients.
pub fn char_poly_roots(cp: &CharPoly) -> Vec<Complex64> {
    let mut a = vec![Complex64::new(1.0, 0.0)];
    a.extend(cp.scaled.iter().map(|v| Complex64::new(*v, 0.0)));
    let n = 6;
    let eval = |z: Complex64| -> (Complex64, Complex64) {
        let mut p = a[0];
        let mut dp = Complex64::new(0.0, 0.0);
        for coef in &a[1..] {
            dp = dp * z + p;
            p = p * z + coef;
        }
        (p, dp)
    };
    let radius = 1.0 + cp.scaled.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius * 0.5, 0.4 + std::f64::consts::TAU * k as f64 / n as f64))
        .collect();
    for _ in 0..500 {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let (p, dp) = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let sum: Complex64 = (0..n).filter(|j| *j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let step = ratio / (1.0 - ratio * sum);
            if step.re.is_finite() && step.im.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm());
            }
        }
        if max_step < 1e-15 * radius {
            break;
        }
    }
    // one Newton polish per root
    for zi in z.iter_mut() {
        let (p, dp) = eval(*zi);
        if dp.norm() > 0.0 {
            let s = p / dp;
            if s.re.is_finite() && s.im.is_finite() {
                *zi -= s;
            }
        }
    }
    z.into_iter().map(|v| v * cp.scale).collect()
}

/// Complete stability assessment of one steady state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    pub char_poly: CharPoly,
    pub rh: RouthHurwitz,
    #[serde(serialize_with = "ser_cvec")]
    pub eigenvalues: Vec<Complex64>,
    pub max_real_eigenvalue: f64,
    /// Eigenvalue verdict (authoritative outside the marginal band).
    pub stable: bool,
    /// |max Re Υ| lies inside the marginal band.
    pub marginal: bool,
    pub method_agreement: bool,
    pub matrix_differences: Vec<EntryDifference>,
}

fn ser_cvec<S: serde::Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for c in v {
        seq.serialize_element(&[c.re, c.im])?;
    }
    seq.end()
}

pub fn analyze(sp: &SystemParams, ss: &SteadyState) -> Result<StabilityReport> {
    let fm = fluctuation_matrix(sp, ss);
    let char_poly = char_poly_coeffs(&fm)?;
    let rh = routh_hurwitz_stable(&char_poly);
    let eigenvalues = eigenvalues(&fm)?;
    let max_re = eigenvalues.iter().map(|v| v.re).fold(f64::NEG_INFINITY, f64::max);
    let marginal = max_re.abs() <= MARGINAL_BAND * sp.kappa;
    let eig_stable = max_re < 0.0;
    let method_agreement = marginal || rh.stable == eig_stable;
    if marginal && rh.stable != eig_stable {
        log::info!("marginal point: RH and eigenvalue verdicts differ (max Re = {max_re:e})");
    }
    Ok(StabilityReport {
        char_poly,
        rh,
        eigenvalues,
        max_real_eigenvalue: max_re,
        stable: eig_stable,
        marginal,
        method_agreement,
        matrix_differences: matrix_differences(sp, ss),
    })
}

impl StabilityReport {
    /// Compact JSON: `{stable, max_re_eig, rh: [6], agreement}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "stable": self.stable,
            "max_re_eig": self.max_real_eigenvalue,
            "rh": self.rh.minors.to_vec(),
            "agreement": self.method_agreement,
        })
    }
}
