//! Real roots of a real cubic by the closed-form (Cardano / trigonometric) route.

use std::f64::consts::TAU;

/// Roots closer than this (relative) are merged into a single fold root.
pub const FOLD_TOLERANCE: f64 = 1e-6;
/// Accepted polynomial residual relative to the largest term magnitude.
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;

/// Real roots of `c[3] x³ + c[2] x² + c[1] x + c[0]`, ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct RealRoots {
    pub roots: Vec<f64>,
    /// True when two roots were merged at a fold.
    pub fold: bool,
}

/// Evaluate the polynomial with Horner's rule.
pub fn eval(c: &[f64; 4], x: f64) -> f64 {
    ((c[3] * x + c[2]) * x + c[1]) * x + c[0]
}

fn eval_deriv(c: &[f64; 4], x: f64) -> f64 {
    (3.0 * c[3] * x + 2.0 * c[2]) * x + c[1]
}

/// Largest magnitude of the individual terms |c_i x^i|.
pub fn term_scale(c: &[f64; 4], x: f64) -> f64 {
    let mut s: f64 = 0.0;
    let mut p = 1.0;
    for ci in c {
        s = s.max((ci * p).abs());
        p *= x;
    }
    s
}

/// |p(x)| / max_i |c_i x^i|; zero when every term vanishes.
pub fn relative_residual(c: &[f64; 4], x: f64) -> f64 {
    let s = term_scale(c, x);
    if s == 0.0 {
        0.0
    } else {
        eval(c, x).abs() / s
    }
}

/// Number of sign changes in (c3, c2, c1, c0), zeros skipped.
pub fn descartes_bound(c: &[f64; 4]) -> usize {
    let signs: Vec<f64> = c.iter().rev().filter(|v| **v != 0.0).map(|v| v.signum()).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

fn newton_polish(c: &[f64; 4], x: f64) -> f64 {
    let d = eval_deriv(c, x);
    if d == 0.0 || !d.is_finite() {
        return x;
    }
    let y = x - eval(c, x) / d;
    if y.is_finite() && eval(c, y).abs() <= eval(c, x).abs() {
        y
    } else {
        x
    }
}

fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    if a == 0.0 {
        if b == 0.0 {
            return Vec::new();
        }
        return vec![-c / b];
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Vec::new();
    }
    // cancellation-free pair
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    if q == 0.0 {
        return vec![0.0, 0.0];
    }
    vec![q / a, c / q]
}

fn cubic_raw(c: &[f64; 4]) -> Vec<f64> {
    let (b, cc, d) = (c[2] / c[3], c[1] / c[3], c[0] / c[3]);
    let p = cc - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * cc / 3.0 + d;
    let shift = -b / 3.0;
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);
    if disc > 0.0 {
        let s = disc.sqrt();
        let u = (-q / 2.0 - q.signum() * s).cbrt();
        let t = if u == 0.0 { 0.0 } else { u - p / (3.0 * u) };
        let r = t + shift;
        // a rounding-split double root shows up as a nearly real complex pair
        // of the deflated quadratic x² + (b + r)x + (cc + r(b + r))
        let bq = b + r;
        let dq = bq * bq - 4.0 * (cc + r * bq);
        if dq.abs() <= (FOLD_TOLERANCE * bq / 2.0).powi(2) {
            vec![r, -bq / 2.0, -bq / 2.0]
        } else {
            vec![r]
        }
    } else if p == 0.0 {
        vec![shift; 3]
    } else {
        let r = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (2.0 * p) * (-3.0 / p).sqrt()).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        (0..3).map(|k| r * (theta - TAU * k as f64 / 3.0).cos() + shift).collect()
    }
}

/// All real roots, ascending, polished by one Newton step and merged at folds.
///
/// Lower-degree cases (leading coefficients exactly zero) are solved exactly.
pub fn real_roots(c: &[f64; 4]) -> RealRoots {
    let mut roots = if c[3] == 0.0 {
        quadratic_roots(c[2], c[1], c[0])
    } else if c[0] == 0.0 {
        let mut r = quadratic_roots(c[3], c[2], c[1]);
        r.push(0.0);
        r
    } else {
        cubic_raw(c)
    };
    for r in roots.iter_mut() {
        *r = newton_polish(c, *r);
    }
    roots.retain(|r| r.is_finite());
    roots.sort_by(|a, b| a.total_cmp(b));

    let mut merged: Vec<f64> = Vec::with_capacity(roots.len());
    let mut fold = false;
    for r in roots {
        if let Some(last) = merged.last_mut() {
            let scale = last.abs().max(r.abs());
            if (r - *last).abs() <= FOLD_TOLERANCE * scale {
                *last = 0.5 * (*last + r);
                fold = true;
                continue;
            }
        }
        merged.push(r);
    }
    RealRoots { roots: merged, fold }
}
