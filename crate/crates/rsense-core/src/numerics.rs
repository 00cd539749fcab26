//! Shared quadrature and root-finding kernel.
//!
//! Semi-infinite integrals with Gaussian tails are truncated at the point
//! where the envelope drops below 1e-16 and then handled by adaptive 15-point
//! Gauss-Kronrod panels. Oscillatory integrands additionally bound the panel
//! width so each panel sees at most 1/8 of a local oscillation period.
//! Subdivision is depth-first left-to-right, so results are bit-reproducible.

use crate::error::{Error, Result};

/// Tolerances and limits for one quadrature call.
#[derive(Debug, Clone, Copy)]
pub struct QuadSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_panels: usize,
}

impl Default for QuadSpec {
    fn default() -> Self {
        QuadSpec {
            rel_tol: 1e-8,
            abs_tol: 1e-12,
            max_panels: 2_000_000,
        }
    }
}

impl QuadSpec {
    fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::InvalidParameter(
                "quadrature tolerances must be positive".into(),
            ));
        }
        if self.max_panels < 64 {
            return Err(Error::InvalidParameter(
                "max_panels must be at least 64".into(),
            ));
        }
        Ok(())
    }
}

/// Integral value together with an error estimate.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
}

// 15-point Kronrod abscissae (positive half) and weights, with the embedded
// 7-point Gauss weights. QUADPACK constants.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

/// One Gauss-Kronrod 15 panel. Returns (value, error estimate).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);

    let mut fv1 = [0.0f64; 7];
    let mut fv2 = [0.0f64; 7];
    let mut res_kronrod = f_center * WGK[7];
    let mut res_gauss = f_center * WG[3];
    let mut res_abs = res_kronrod.abs();

    for j in 0..7 {
        let dx = half * XGK[j];
        let y1 = f(center - dx);
        let y2 = f(center + dx);
        fv1[j] = y1;
        fv2[j] = y2;
        let sum = y1 + y2;
        res_kronrod += WGK[j] * sum;
        res_abs += WGK[j] * (y1.abs() + y2.abs());
        if j % 2 == 1 {
            res_gauss += WG[j / 2] * sum;
        }
    }

    let mean = 0.5 * res_kronrod;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = res_kronrod * half;
    let err = rescale_error(
        (res_kronrod - res_gauss) * half,
        res_abs * half.abs(),
        res_asc * half.abs(),
    );
    (value, err)
}

struct Refiner<'a, F> {
    f: &'a F,
    // allowed error per unit width
    tol_density: f64,
    panels_used: usize,
    max_panels: usize,
    value: f64,
    error: f64,
}

impl<F: Fn(f64) -> f64> Refiner<'_, F> {
    fn refine(&mut self, a: f64, b: f64, v: f64, e: f64, depth: u32) -> Result<()> {
        let width = b - a;
        if e <= self.tol_density * width || depth >= 60 || width < 1e-15 * a.abs().max(1.0) {
            self.value += v;
            self.error += e;
            return Ok(());
        }
        if self.panels_used >= self.max_panels {
            return Err(Error::QuadratureFailure {
                max_panels: self.max_panels,
                a,
                b,
                err: e,
            });
        }
        self.panels_used += 1;
        let mid = 0.5 * (a + b);
        let (vl, el) = gk15(self.f, a, mid);
        let (vr, er) = gk15(self.f, mid, b);
        // Stagnation guard: once the estimate is dominated by rounding noise,
        // bisection stops shrinking it. Accept the children and keep their
        // error in the (honest) running total instead of burning the budget.
        if el + er >= e {
            self.value += vl + vr;
            self.error += el + er;
            return Ok(());
        }
        self.refine(a, mid, vl, el, depth + 1)?;
        self.refine(mid, b, vr, er, depth + 1)
    }
}

/// Adaptive refinement over a fixed initial panelization.
fn adapt<F: Fn(f64) -> f64>(f: &F, panels: &[(f64, f64)], spec: &QuadSpec) -> Result<QuadResult> {
    spec.validate()?;
    let total_width: f64 = panels.iter().map(|&(a, b)| b - a).sum();
    if total_width <= 0.0 {
        return Ok(QuadResult {
            value: 0.0,
            error: 0.0,
        });
    }

    // Rough first pass fixes the error budget.
    let mut estimates = Vec::with_capacity(panels.len());
    let mut rough = 0.0;
    for &(a, b) in panels {
        let (v, e) = gk15(f, a, b);
        rough += v;
        estimates.push((v, e));
    }

    // Half-budget safety margin against the rough estimate drifting.
    let target = 0.5 * (spec.rel_tol * rough.abs() + spec.abs_tol);
    let mut refiner = Refiner {
        f,
        tol_density: target / total_width,
        panels_used: panels.len(),
        max_panels: spec.max_panels,
        value: 0.0,
        error: 0.0,
    };
    for (i, &(a, b)) in panels.iter().enumerate() {
        let (v, e) = estimates[i];
        refiner.refine(a, b, v, e, 0)?;
    }
    Ok(QuadResult {
        value: refiner.value,
        error: refiner.error,
    })
}

/// Truncation point for an integrand carrying a Gaussian envelope
/// exp(-k^2 / (2 decay_scale^2)): where the envelope falls below 1e-16.
pub fn gaussian_cutoff(decay_scale: f64) -> f64 {
    decay_scale * (-2.0 * 1e-16f64.ln()).sqrt()
}

/// Integrate f over (0, inf) where f carries a Gaussian envelope with the
/// given decay scale (in k units: envelope exp(-k^2/(2 s^2))).
pub fn integrate_semiinfinite<F: Fn(f64) -> f64>(
    f: F,
    decay_scale: f64,
    spec: &QuadSpec,
) -> Result<QuadResult> {
    if decay_scale <= 0.0 {
        return Err(Error::InvalidParameter("decay_scale must be positive".into()));
    }
    integrate_finite(f, 0.0, gaussian_cutoff(decay_scale), spec)
}

/// Adaptive integral over a finite interval.
pub fn integrate_finite<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadSpec,
) -> Result<QuadResult> {
    let panels = equal_panels(a, b, 64);
    adapt(&f, &panels, spec)
}

fn equal_panels(a: f64, b: f64, n: usize) -> Vec<(f64, f64)> {
    let h = (b - a) / n as f64;
    (0..n)
        .map(|i| {
            let lo = a + h * i as f64;
            let hi = if i + 1 == n { b } else { a + h * (i + 1) as f64 };
            (lo, hi)
        })
        .collect()
}

/// Build the initial panelization for an integrand oscillating as
/// cos(phi(k) t): panel width is capped at pi / (4 t |phi'|) so each panel
/// covers at most 1/8 of a local period.
pub fn oscillatory_panels<R: Fn(f64) -> f64>(
    phase_rate: R,
    t: f64,
    a: f64,
    b: f64,
    max_panels: usize,
) -> Result<Vec<(f64, f64)>> {
    let h_smooth = (b - a) / 64.0;
    let mut panels = Vec::new();
    let mut k = a;
    while k < b {
        let mut h = h_smooth;
        // Two sweeps: the second re-evaluates the rate at the tentative far
        // edge so a rising |phi'| cannot be missed across the panel.
        for _ in 0..2 {
            let r = phase_rate(k).abs().max(phase_rate((k + h).min(b)).abs());
            if t * r > 0.0 {
                h = h.min(std::f64::consts::PI / (4.0 * t * r));
            }
        }
        let end = (k + h).min(b);
        if panels.len() >= max_panels {
            return Err(Error::QuadratureFailure {
                max_panels,
                a: k,
                b: end,
                err: f64::INFINITY,
            });
        }
        panels.push((k, end));
        k = end;
    }
    Ok(panels)
}

/// Integrate an oscillatory integrand f(k) ~ envelope(k) cos(phi(k) t) over
/// (0, inf), with `phase_rate` supplying |phi'(k)| and the Gaussian envelope
/// fixing the truncation point. t = 0 reduces to `integrate_semiinfinite`.
pub fn integrate_oscillatory<F, R>(
    f: F,
    phase_rate: R,
    t: f64,
    decay_scale: f64,
    spec: &QuadSpec,
) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
    R: Fn(f64) -> f64,
{
    if t < 0.0 {
        return Err(Error::Domain("oscillation time must be non-negative".into()));
    }
    if t == 0.0 {
        return integrate_semiinfinite(f, decay_scale, spec);
    }
    if decay_scale <= 0.0 {
        return Err(Error::InvalidParameter("decay_scale must be positive".into()));
    }
    let b = gaussian_cutoff(decay_scale);
    let panels = oscillatory_panels(phase_rate, t, 0.0, b, spec.max_panels)?;
    adapt(&f, &panels, spec)
}

/// Same as [`integrate_oscillatory`] on an explicit finite interval.
pub fn integrate_oscillatory_finite<F, R>(
    f: F,
    phase_rate: R,
    t: f64,
    a: f64,
    b: f64,
    spec: &QuadSpec,
) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
    R: Fn(f64) -> f64,
{
    if t <= 0.0 {
        return integrate_finite(f, a, b, spec);
    }
    let panels = oscillatory_panels(phase_rate, t, a, b, spec.max_panels)?;
    adapt(&f, &panels, spec)
}

/// Brent's method on a bracketing interval: f(a) and f(b) must differ in sign.
/// Converges to |delta| < tol and never evaluates outside [a, b].
pub fn find_root_bracketed<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let mut a = a;
    let mut b = b;
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoBracket { a, b });
    }

    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    let eps = f64::EPSILON;

    for _ in 0..200 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * eps * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // inverse quadratic interpolation, or secant when a == c
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let q0 = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * q0 * (q0 - r) - (b - a) * (r - 1.0));
                q = (q0 - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            if 2.0 * p < (3.0 * xm * q - (tol1 * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 {
            d
        } else {
            tol1.copysign(xm)
        };
        fb = f(b);
    }
    Ok(b)
}

/// Central difference with one Richardson extrapolation step.
pub fn central_diff<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    let d1 = (f(x + h) - f(x - h)) / (2.0 * h);
    let d2 = (f(x + 0.5 * h) - f(x - 0.5 * h)) / h;
    (4.0 * d2 - d1) / 3.0
}
