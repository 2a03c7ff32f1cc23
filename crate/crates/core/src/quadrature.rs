//! Floating-point adaptive Simpson quadrature for `∫ e^{-t} tⁿ dt`, used only
//! as an independent numerical cross-check of the exact integral values.
//!
//! Tolerances are mixed absolute/relative: a result is accepted when its
//! estimated error is at most `tol · max(1, |value|)`.

use crate::error::{Error, Result};

/// Cap on integrand evaluations for a single integral.
pub const MAX_EVALUATIONS: usize = 1_000_000;

pub const MIN_TOLERANCE: f64 = 1e-12;
pub const MAX_MONOMIAL_DEGREE: u32 = 20;
pub const MAX_TAIL_DEGREE: u32 = 15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub estimated_error: f64,
    pub evaluations: usize,
}

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

/// Adaptive Simpson on `[a, b]` with absolute target `abs_tol`. Each panel is
/// compared against its two halves; the Richardson-corrected halves are kept
/// once `|halves - whole| <= 15·tol`.
fn adaptive_simpson(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    abs_tol: f64,
    budget: usize,
) -> Result<QuadResult> {
    let (fa, fb) = (f(a), f(b));
    let m = 0.5 * (a + b);
    let fm = f(m);
    let mut evaluations = 3;
    let mut stack = vec![Panel {
        a,
        b,
        fa,
        fm,
        fb,
        whole: simpson(a, b, fa, fm, fb),
        tol: abs_tol,
    }];
    let (mut value, mut error) = (0.0, 0.0);
    while let Some(p) = stack.pop() {
        let m = 0.5 * (p.a + p.b);
        let lm = 0.5 * (p.a + m);
        let rm = 0.5 * (m + p.b);
        let (flm, frm) = (f(lm), f(rm));
        evaluations += 2;
        if evaluations > budget {
            return Err(Error::NonConvergence { evaluations });
        }
        let left = simpson(p.a, m, p.fa, flm, p.fm);
        let right = simpson(m, p.b, p.fm, frm, p.fb);
        let delta = left + right - p.whole;
        if delta.abs() <= 15.0 * p.tol || (m - p.a) <= f64::EPSILON * p.a.abs().max(1.0) {
            value += left + right + delta / 15.0;
            error += delta.abs() / 15.0;
        } else {
            stack.push(Panel {
                a: m,
                b: p.b,
                fa: p.fm,
                fm: frm,
                fb: p.fb,
                whole: right,
                tol: 0.5 * p.tol,
            });
            stack.push(Panel {
                a: p.a,
                b: m,
                fa: p.fa,
                fm: flm,
                fb: p.fm,
                whole: left,
                tol: 0.5 * p.tol,
            });
        }
    }
    Ok(QuadResult {
        value,
        estimated_error: error,
        evaluations,
    })
}

/// Composite Simpson with 64 panels; a rough magnitude for scaling tolerances.
fn rough(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, usize) {
    const PANELS: usize = 64;
    let h = (b - a) / PANELS as f64;
    let sum: f64 = (0..PANELS)
        .map(|i| {
            let x = a + i as f64 * h;
            simpson(x, x + h, f(x), f(x + 0.5 * h), f(x + h))
        })
        .sum();
    (sum, 3 * PANELS)
}

/// Mixed-tolerance driver: tightens the absolute target until the error
/// estimate is within `tol · max(1, |value|)`.
fn integrate_mixed(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<QuadResult> {
    let (estimate, mut evaluations) = rough(f, a, b);
    let mut abs_tol = tol * estimate.abs().max(1.0);
    loop {
        let r = adaptive_simpson(
            f,
            a,
            b,
            abs_tol,
            MAX_EVALUATIONS - evaluations.min(MAX_EVALUATIONS),
        )?;
        evaluations += r.evaluations;
        let target = tol * r.value.abs().max(1.0);
        if r.estimated_error <= target {
            return Ok(QuadResult { evaluations, ..r });
        }
        abs_tol = abs_tol.min(target) * 0.5;
    }
}

fn integrand(n: u32) -> impl Fn(f64) -> f64 {
    move |t: f64| (-t).exp() * t.powi(n as i32)
}

fn check_tolerance(tol: f64) -> Result<()> {
    if !tol.is_finite() || tol < MIN_TOLERANCE {
        return Err(Error::Precondition(format!(
            "tolerance must be finite and >= {MIN_TOLERANCE:e}, got {tol:e}"
        )));
    }
    Ok(())
}

/// `∫_a^b e^{-t} tⁿ dt`.
pub fn integrate_exp_monomial(n: u32, a: f64, b: f64, tol: f64) -> Result<QuadResult> {
    check_tolerance(tol)?;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::Precondition(format!(
            "need finite bounds a < b, got [{a}, {b}]"
        )));
    }
    if n > MAX_MONOMIAL_DEGREE {
        return Err(Error::Precondition(format!(
            "degree {n} exceeds {MAX_MONOMIAL_DEGREE}"
        )));
    }
    integrate_mixed(&integrand(n), a, b, tol)
}

/// `∫_T^∞ e^{-t} tⁿ dt <= 2 Tⁿ e^{-T}`, valid for `T >= 2n`.
pub fn tail_bound(n: u32, cutoff: f64) -> f64 {
    assert!(cutoff >= 2.0 * f64::from(n), "tail bound needs T >= 2n");
    (std::f64::consts::LN_2 + f64::from(n) * cutoff.ln() - cutoff).exp()
}

/// Truncation point for [`integrate_tail`]: starts at `max(50, 4n)` and grows
/// until the tail bound is below `target`.
pub fn tail_cutoff(n: u32, target: f64) -> f64 {
    let mut cutoff = f64::from(n * 4).max(50.0);
    while tail_bound(n, cutoff) >= target {
        cutoff += 10.0;
    }
    cutoff
}

/// `∫_0^∞ e^{-t} tⁿ dt` as a finite integral on `[0, T]` plus the certified
/// tail bound, which is included in `estimated_error`.
pub fn integrate_tail(n: u32, tol: f64) -> Result<QuadResult> {
    check_tolerance(tol)?;
    if n > MAX_TAIL_DEGREE {
        return Err(Error::Precondition(format!(
            "degree {n} exceeds {MAX_TAIL_DEGREE}"
        )));
    }
    let f = integrand(n);
    let start = f64::from(n * 4).max(50.0);
    let (estimate, rough_evals) = rough(&f, 0.0, start);
    let scale = estimate.abs().max(1.0);
    let cutoff = tail_cutoff(n, 0.5 * tol * scale);
    let tail = tail_bound(n, cutoff);
    let body = integrate_mixed(&f, 0.0, cutoff, 0.5 * tol)?;
    Ok(QuadResult {
        value: body.value,
        estimated_error: body.estimated_error + tail,
        evaluations: body.evaluations + rough_evals,
    })
}
