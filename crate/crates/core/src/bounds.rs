//! Trade-off inequality audits over measured quantities, and the
//! spacetime heuristic calculator.
//!
//! Every entry is oriented so `margin = lhs − rhs ≥ 0` means the bound
//! holds. Cosine expressions are clamped to their validity window
//! (`θ ≤ π/2`, vacuous beyond) mirroring
//! [`crate::metrics::mt_overlap_bound`].

use serde::Serialize;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};

use crate::HBAR;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Holds,
    Fails,
    /// The right-hand side is degenerate; any admissible input passes.
    Vacuous,
    /// Outside the stated validity range of the inequality.
    Inapplicable,
}

/// One audited inequality.
#[derive(Debug, Clone, Serialize)]
pub struct AuditEntry {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs − rhs`; nonnegative when the bound holds.
    pub margin: f64,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

impl AuditEntry {
    fn new(name: &str, lhs: f64, rhs: f64) -> Self {
        let margin = lhs - rhs;
        let verdict = if margin >= 0.0 {
            Verdict::Holds
        } else {
            Verdict::Fails
        };
        Self {
            name: name.into(),
            lhs,
            rhs,
            margin,
            verdict,
            notes: vec![],
        }
    }

    fn with_note(mut self, note: String) -> Self {
        self.notes.push(note);
        self
    }

    fn vacuous(mut self) -> Self {
        if self.verdict == Verdict::Holds {
            self.verdict = Verdict::Vacuous;
        }
        self
    }

    pub fn holds(&self) -> bool {
        matches!(self.verdict, Verdict::Holds | Verdict::Vacuous)
    }
}

/// `cos θ` clamped to its validity window: 0 for `θ > π/2`.
fn clamped_cos(theta: f64) -> f64 {
    if theta.abs() <= FRAC_PI_2 {
        theta.cos()
    } else {
        0.0
    }
}

/// Main trade-off: `τ·ΔH_A ≥ πℏ/4`.
pub fn audit_main(tau: f64, delta_h_a: f64) -> AuditEntry {
    AuditEntry::new(
        "energy-time",
        tau * delta_h_a,
        FRAC_PI_4 * HBAR,
    )
}

/// N-outcome form: `cos(τΔH_A/ℏ) ≤ 1/√N`; `N = None` is the
/// infinitely-many-outcomes limit `τ·ΔH_A ≥ πℏ/2`.
pub fn audit_n_outcomes(tau: f64, delta_h_a: f64, n: Option<usize>) -> crate::Result<AuditEntry> {
    match n {
        Some(n) => {
            if n < 2 {
                return Err(crate::Error::Argument("need N ≥ 2 outcomes".into()));
            }
            let theta = tau * delta_h_a / HBAR;
            Ok(AuditEntry::new(
                &format!("energy-time-{n}-outcomes"),
                1.0 / (n as f64).sqrt(),
                clamped_cos(theta),
            ))
        }
        None => Ok(AuditEntry::new(
            "energy-time-infinite-outcomes",
            tau * delta_h_a,
            FRAC_PI_2 * HBAR,
        )),
    }
}

/// Overall-width form: `τ·Δ_α(H) ≥ 2ℏ·arccos((1/√2 + 1 − α)/α)`,
/// valid for `α ≥ (1 + 1/√2)/2`.
pub fn audit_width(tau: f64, delta_alpha: f64, alpha: f64) -> AuditEntry {
    let threshold = 0.5 * (1.0 + FRAC_1_SQRT_2);
    if alpha < threshold || alpha > 1.0 {
        let mut e = AuditEntry::new("overall-width", tau * delta_alpha, 0.0);
        e.verdict = Verdict::Inapplicable;
        e.notes
            .push(format!("α = {alpha} outside the validity range [{threshold:.6}, 1]"));
        return e;
    }
    let arg = ((FRAC_1_SQRT_2 + 1.0 - alpha) / alpha).clamp(-1.0, 1.0);
    let rhs = 2.0 * HBAR * arg.acos();
    let mut entry = AuditEntry::new("overall-width", tau * delta_alpha, rhs);
    if (alpha - threshold).abs() < 1e-12 {
        entry = entry
            .with_note(
                "at α = (1+1/√2)/2 the bound degenerates to 0; the quoted 2πℏ/3 value at this α \
                 is not reproduced by the formula"
                    .into(),
            )
            .vacuous();
    }
    entry
}

/// Error-tolerant form: `cos(τΔH_A/ℏ) ≤ √((1 + 6√P_error)/2)`; vacuous
/// once `P_error ≥ 1/36`.
pub fn audit_error_tolerant(tau: f64, delta_h_a: f64, p_error: f64) -> crate::Result<AuditEntry> {
    if !(0.0..=1.0).contains(&p_error) {
        return Err(crate::Error::Argument(format!(
            "P_error = {p_error} outside [0, 1]"
        )));
    }
    let rhs_val = ((1.0 + 6.0 * p_error.sqrt()) / 2.0).sqrt();
    let theta = tau * delta_h_a / HBAR;
    let mut entry = AuditEntry::new("energy-time-with-error", rhs_val, clamped_cos(theta));
    if rhs_val >= 1.0 {
        entry = entry
            .with_note(format!(
                "vacuous: P_error = {p_error:.6} ≥ 1/36 puts the bound above every overlap"
            ))
            .vacuous();
    }
    Ok(entry)
}

/// Interaction-strength trade-offs: `‖V‖·τ ≥ πℏ/4`, the N-outcome form
/// `cos(‖V‖τ/ℏ) ≤ 1/√N`, and the infinite-outcome form
/// `‖V‖·τ ≥ πℏ/2`.
#[derive(Debug, Clone, Serialize)]
pub struct InteractionAudit {
    pub two_outcome: AuditEntry,
    pub n_outcome: Option<AuditEntry>,
    pub infinite: AuditEntry,
}

pub fn audit_interaction(tau: f64, v_norm: f64, n: Option<usize>) -> crate::Result<InteractionAudit> {
    if v_norm < 0.0 {
        return Err(crate::Error::Argument("‖V‖ must be nonnegative".into()));
    }
    let two_outcome = AuditEntry::new("interaction-time", v_norm * tau, FRAC_PI_4 * HBAR);
    let n_outcome = match n {
        Some(n) => {
            if n < 2 {
                return Err(crate::Error::Argument("need N ≥ 2 outcomes".into()));
            }
            let theta = v_norm * tau / HBAR;
            Some(AuditEntry::new(
                &format!("interaction-time-{n}-outcomes"),
                1.0 / (n as f64).sqrt(),
                clamped_cos(theta),
            ))
        }
        None => None,
    };
    let infinite = AuditEntry::new(
        "interaction-time-infinite-outcomes",
        v_norm * tau,
        FRAC_PI_2 * HBAR,
    );
    Ok(InteractionAudit {
        two_outcome,
        n_outcome,
        infinite,
    })
}

/// Locality-corrected lattice form: `ΔH_Λ·τ ≥ πℏ/4 − (πℏ/2)√(2ε)`.
pub fn audit_lattice(tau: f64, delta_h_box: f64, epsilon: f64) -> crate::Result<AuditEntry> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(crate::Error::Argument(format!(
            "ε = {epsilon} outside [0, 1]"
        )));
    }
    let rhs = FRAC_PI_4 * HBAR - FRAC_PI_2 * HBAR * (2.0 * epsilon).sqrt();
    let mut entry = AuditEntry::new("energy-time-boxed", tau * delta_h_box, rhs);
    if rhs <= 0.0 {
        entry = entry
            .with_note(format!(
                "vacuous: locality error ε = {epsilon:.6} ≥ 1/8 drives the bound to zero"
            ))
            .vacuous();
    }
    Ok(entry)
}

/// Physical constants for the spacetime heuristic.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Constants {
    pub g: f64,
    pub c: f64,
    pub hbar: f64,
}

impl Constants {
    pub fn si() -> Self {
        Self {
            g: 6.674_30e-11,
            c: 2.997_924_58e8,
            hbar: 1.054_571_817e-34,
        }
    }

    pub fn natural() -> Self {
        Self {
            g: 1.0,
            c: 1.0,
            hbar: 1.0,
        }
    }
}

/// Pure-arithmetic spacetime heuristic: minimal energy/mass to measure
/// in a region of radius `R` within time `τ`, the horizon-avoidance
/// constraint, their combination, and the small-τ product bound.
#[derive(Debug, Clone, Serialize)]
pub struct SpacetimeReport {
    pub radius: f64,
    pub tau: f64,
    /// Minimal mass from `M c² τ ≥ πℏ/4`.
    pub mass_lower_bound: f64,
    /// Schwarzschild radius of that minimal mass.
    pub schwarzschild_radius: f64,
    /// Whether `R + cτ` clears the horizon of the minimal mass.
    pub horizon_cleared: bool,
    /// `τ(R+cτ)c⁴/2G` against `πℏ/4`.
    pub combined: AuditEntry,
    /// Small-τ product bound `τ·R ≥ πℏG/(2c⁴)`.
    pub small_tau: AuditEntry,
    /// Threshold `πℏG/(2c⁴)` in the supplied units.
    pub product_threshold: f64,
}

pub fn spacetime_heuristic(radius: f64, tau: f64, k: &Constants) -> crate::Result<SpacetimeReport> {
    if !(radius > 0.0) || !(tau > 0.0) {
        return Err(crate::Error::Argument(
            "radius and τ must be positive".into(),
        ));
    }
    let mass_lower_bound = FRAC_PI_4 * k.hbar / (k.c * k.c * tau);
    let schwarzschild_radius = 2.0 * k.g * mass_lower_bound / (k.c * k.c);
    let horizon_cleared = radius + k.c * tau >= schwarzschild_radius;
    let combined = AuditEntry::new(
        "combined-horizon",
        tau * (radius + k.c * tau) * k.c.powi(4) / (2.0 * k.g),
        FRAC_PI_4 * k.hbar,
    );
    let product_threshold = FRAC_PI_2 * k.hbar * k.g / k.c.powi(4);
    let small_tau = AuditEntry::new("small-tau-product", tau * radius, product_threshold);
    Ok(SpacetimeReport {
        radius,
        tau,
        mass_lower_bound,
        schwarzschild_radius,
        horizon_cleared,
        combined,
        small_tau,
        product_threshold,
    })
}

/// Assembled per-model audit report.
#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub model: String,
    pub tau: f64,
    pub delta_h_a: Option<f64>,
    pub delta_alpha: Vec<(f64, f64)>,
    pub v_norm: Option<f64>,
    pub n_outcomes: Option<usize>,
    pub p_error: Option<f64>,
    pub entries: Vec<AuditEntry>,
    pub notes: Vec<String>,
}

/// Raw audit inputs, any subset present.
#[derive(Debug, Clone, Default)]
pub struct AuditInputs {
    pub tau: Option<f64>,
    pub delta_h_a: Option<f64>,
    /// `(α, Δ_α)` pairs.
    pub delta_alpha: Vec<(f64, f64)>,
    pub v_norm: Option<f64>,
    pub n_outcomes: Option<usize>,
    pub p_error: Option<f64>,
    pub epsilon: Option<f64>,
    pub delta_h_box: Option<f64>,
}

/// Evaluate every applicable inequality on the supplied quantities.
pub fn audit_all(model: &str, inputs: &AuditInputs, notes: &[String]) -> crate::Result<AuditReport> {
    let tau = inputs
        .tau
        .ok_or_else(|| crate::Error::Argument("τ is required for audits".into()))?;
    let mut entries = Vec::new();
    if let Some(dh) = inputs.delta_h_a {
        entries.push(audit_main(tau, dh));
        if let Some(n) = inputs.n_outcomes {
            entries.push(audit_n_outcomes(tau, dh, Some(n))?);
        }
        if let Some(pe) = inputs.p_error {
            entries.push(audit_error_tolerant(tau, dh, pe)?);
        }
    }
    for &(alpha, da) in &inputs.delta_alpha {
        entries.push(audit_width(tau, da, alpha));
    }
    if let Some(vn) = inputs.v_norm {
        let ia = audit_interaction(tau, vn, inputs.n_outcomes)?;
        entries.push(ia.two_outcome);
        if let Some(e) = ia.n_outcome {
            entries.push(e);
        }
        entries.push(ia.infinite);
    }
    if let (Some(eps), Some(dhb)) = (inputs.epsilon, inputs.delta_h_box) {
        entries.push(audit_lattice(tau, dhb, eps)?);
    }
    if entries.is_empty() {
        return Err(crate::Error::Argument(
            "no applicable audit columns supplied".into(),
        ));
    }
    Ok(AuditReport {
        model: model.into(),
        tau,
        delta_h_a: inputs.delta_h_a,
        delta_alpha: inputs.delta_alpha.clone(),
        v_norm: inputs.v_norm,
        n_outcomes: inputs.n_outcomes,
        p_error: inputs.p_error,
        entries,
        notes: notes.to_vec(),
    })
}
