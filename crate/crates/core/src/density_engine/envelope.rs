//! Cutoffs, error envelopes and the logarithmic integral.
//!
//! Envelopes carry an implied constant of 1. They describe the shape of a
//! remainder for trend comparison and are not bounds.

use num_rational::Rational64;
use num_traits::{One, ToPrimitive, Zero};

use super::DensityError;

/// `li(2)`, the offset between `∫₂^x dt/log t` and `li(x)`.
pub const LI_2: f64 = 1.045_163_780_117_492_8;

const LI_REL_TOL: f64 = 1e-12;
const LI_MAX_DEPTH: u32 = 60;

/// Largest prime that can divide `e1` at a prime `p ≤ x`.
pub fn cutoff_s(x: f64) -> f64 {
    2.0 * x.sqrt()
}

/// Constants `(α, β, γ)` and auxiliary pairs `(α_i, β_i)` of a counting
/// error budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrorBudget {
    pub alpha: Rational64,
    pub beta: Rational64,
    pub gamma: Rational64,
    pub aux: Vec<(Rational64, Rational64)>,
}

impl ErrorBudget {
    /// `(3/2, 2, 0)` with the single auxiliary pair `(1, 1)`: the budget of
    /// division fields of an elliptic curve with finitely many points.
    pub fn division_fields() -> Self {
        ErrorBudget {
            alpha: Rational64::new(3, 2),
            beta: Rational64::from_integer(2),
            gamma: Rational64::zero(),
            aux: vec![(Rational64::one(), Rational64::one())],
        }
    }

    fn denominator(&self) -> Rational64 {
        self.beta + self.gamma + Rational64::one()
    }

    pub fn validate(&self) -> Result<(), DensityError> {
        let half = Rational64::new(1, 2);
        let neg = [("alpha", self.alpha), ("beta", self.beta), ("gamma", self.gamma)]
            .into_iter()
            .chain(self.aux.iter().flat_map(|&(a, b)| [("alpha_i", a), ("beta_i", b)]))
            .find(|(_, v)| *v < Rational64::zero());
        if let Some((name, v)) = neg {
            return Err(DensityError::InvalidBudget(format!("{name} = {v} is negative")));
        }
        if self.alpha <= half {
            return Err(DensityError::InvalidBudget(format!("alpha = {} must exceed 1/2", self.alpha)));
        }
        let (x_exp, _) = self.exponents();
        if x_exp >= Rational64::one() {
            return Err(DensityError::InvalidBudget(format!("envelope exponent {x_exp} is not below 1")));
        }
        let slope = (self.alpha - half) / self.denominator();
        for (i, &(a, b)) in self.aux.iter().enumerate() {
            let v = a - b * slope;
            if v >= Rational64::one() {
                return Err(DensityError::InvalidBudget(format!("auxiliary pair {} gives exponent {v}", i + 1)));
            }
        }
        Ok(())
    }

    fn exponents(&self) -> (Rational64, Rational64) {
        let half = Rational64::new(1, 2);
        let frac = (Rational64::one() + self.gamma) / self.denominator();
        (half + (self.alpha - half) * frac, Rational64::one() - frac)
    }
}

impl Default for ErrorBudget {
    fn default() -> Self {
        ErrorBudget::division_fields()
    }
}

fn ratio_f64(r: Rational64) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exponents `(a, b)` of the envelope `x^a (log x)^b`, exactly.
pub fn envelope_exponents(budget: &ErrorBudget) -> Result<(Rational64, Rational64), DensityError> {
    budget.validate()?;
    Ok(budget.exponents())
}

/// `y(x) = (x^(α−1/2) / log x)^(1/(β+γ+1))`.
pub fn cutoff_y(x: f64, budget: &ErrorBudget) -> Result<f64, DensityError> {
    budget.validate()?;
    if x.is_nan() || x <= std::f64::consts::E {
        return Err(DensityError::Domain(format!("cutoff needs x > e, got {x}")));
    }
    let num = x.powf(ratio_f64(budget.alpha - Rational64::new(1, 2))) / x.ln();
    Ok(num.powf(1.0 / ratio_f64(budget.denominator())))
}

/// `x^a (log x)^b` with the exponents of [`envelope_exponents`].
pub fn error_envelope(x: f64, budget: &ErrorBudget) -> Result<f64, DensityError> {
    let (a, b) = envelope_exponents(budget)?;
    if x.is_nan() || x <= 1.0 {
        return Err(DensityError::Domain(format!("envelope needs x > 1, got {x}")));
    }
    Ok(x.powf(ratio_f64(a)) * x.ln().powf(ratio_f64(b)))
}

/// `y(x)^(−decay) · x / log x`, the size of the truncated tail times
/// `li(x)` when `|h(y)| ≪ y^(−decay)`.
pub fn tail_envelope(x: f64, budget: &ErrorBudget, decay: Rational64) -> Result<f64, DensityError> {
    let y = cutoff_y(x, budget)?;
    Ok(y.powf(-ratio_f64(decay)) * x / x.ln())
}

/// `(main, envelope)` for a class of relative size `class_size/group_size`:
/// `main = ratio · li(x)` and `envelope = ratio · √x · (log_disc + degree · log x)`.
pub fn chebotarev_error(
    x: f64,
    class_size: f64,
    group_size: f64,
    log_disc: f64,
    degree_over_q: f64,
) -> Result<(f64, f64), DensityError> {
    if !(class_size > 0.0 && group_size > 0.0 && log_disc >= 0.0 && degree_over_q > 0.0) {
        return Err(DensityError::Domain("class, group and degree must be positive".into()));
    }
    let ratio = class_size / group_size;
    let main = ratio * log_integral(x)?;
    let envelope = ratio * x.sqrt() * (log_disc + degree_over_q * x.ln());
    Ok((main, envelope))
}

/// `n·log d_K + D(1 − 1/n)·Σ log p + D·log n` for an extension of relative
/// degree `n` and absolute degree `D`, ramified only above `ramified`.
pub fn discriminant_log_bound(n: u64, log_dk: f64, ramified: &[u64], degree_over_q: f64) -> Result<f64, DensityError> {
    if n == 0 {
        return Err(DensityError::Domain("relative degree must be at least 1".into()));
    }
    let nf = n as f64;
    let log_sum: f64 = ramified.iter().map(|&p| (p as f64).ln()).sum();
    Ok(nf * log_dk + degree_over_q * (1.0 - 1.0 / nf) * log_sum + degree_over_q * nf.ln())
}

fn simpson(f: &impl Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
    let m = 0.5 * (a + b);
    let fm = f(m);
    (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
}

#[allow(clippy::too_many_arguments)]
fn adaptive(f: &impl Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64, whole: f64, m: f64, fm: f64, tol: f64, depth: u32) -> f64 {
    let (lm, flm, left) = simpson(f, a, fa, m, fm);
    let (rm, frm, right) = simpson(f, m, fm, b, fb);
    let diff = left + right - whole;
    if depth == 0 || diff.abs() <= 15.0 * tol {
        return left + right + diff / 15.0;
    }
    adaptive(f, a, fa, m, fm, left, lm, flm, tol / 2.0, depth - 1)
        + adaptive(f, m, fm, b, fb, right, rm, frm, tol / 2.0, depth - 1)
}

/// `li(x) = li(2) + ∫₂^x dt / log t` for `x ≥ 2`, by adaptive Simpson in
/// `s = log t`.
pub fn log_integral(x: f64) -> Result<f64, DensityError> {
    if x.is_nan() || x < 2.0 {
        return Err(DensityError::Domain(format!("li needs x >= 2, got {x}")));
    }
    if x == 2.0 {
        return Ok(LI_2);
    }
    let f = |s: f64| s.exp() / s;
    let (a, b) = (2f64.ln(), x.ln());
    let (fa, fb) = (f(a), f(b));
    let (m, fm, whole) = simpson(&f, a, fa, b, fb);
    let scale = x / b;
    Ok(LI_2 + adaptive(&f, a, fa, b, fb, whole, m, fm, LI_REL_TOL * scale, LI_MAX_DEPTH))
}
