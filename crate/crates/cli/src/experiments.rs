//! Builds models from configs, executes protocols, and assembles the
//! artifact set in memory (nothing is written until a run succeeds).

use num_complex::Complex64 as C64;
use serde::Serialize;

use qswitch_core::bounds::{self, AuditInputs};
use qswitch_core::conditions;
use qswitch_core::grids::Bump;
use qswitch_core::lattice;
use qswitch_core::linalg;
use qswitch_core::measure;
use qswitch_core::models::{
    chiral_model, conditional_rotation_model, conditional_shift_model, gaussian_model,
    random_finite_model, standard_model, stern_gerlach_2d, GaussianPacketParams, GridExtras,
    GridOptions, Meter, Model, ModelKind, Pvm, SternGerlachParams,
};
use qswitch_core::states::{CompositeSpace, QuantumState};

use crate::config::{Config, ConfigError};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Artifact set: relative file name → contents.
#[derive(Debug, Default)]
pub struct Artifacts {
    pub files: Vec<(String, String)>,
}

impl Artifacts {
    pub fn push(&mut self, name: &str, contents: String) {
        self.files.push((name.to_string(), contents));
    }

    pub fn write_all(&self, dir: &std::path::Path) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        for (name, contents) in &self.files {
            std::fs::write(dir.join(name), contents)?;
        }
        Ok(())
    }
}

/// CLI-level failure with the exit-code category attached.
#[derive(Debug)]
pub enum CliError {
    /// Malformed or unknown configuration (exit 1).
    Config(String),
    /// Infeasible parameters or failed validation (exit 2).
    Validation(String),
    /// Numerical tolerance failure during a run (exit 3).
    Tolerance(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Validation(m) => write!(f, "validation error: {m}"),
            CliError::Tolerance(m) => write!(f, "numerical tolerance failure: {m}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Tolerance(_) => 3,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<qswitch_core::Error> for CliError {
    fn from(e: qswitch_core::Error) -> Self {
        match e {
            qswitch_core::Error::Tolerance(m) => CliError::Tolerance(m),
            qswitch_core::Error::Config(m) => CliError::Validation(m),
            other => CliError::Validation(other.to_string()),
        }
    }
}

/// Command-line overrides threaded into model construction.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub grid_n: Option<usize>,
    pub dt: Option<f64>,
}

const KNOWN_KEYS: &[&str] = &[
    "units",
    "experiment",
    "seed",
    "model.pointer_width",
    "model.tau",
    "model.interaction_width",
    "model.packet_width",
    "model.amplitude",
    "model.mass",
    "model.wave_number",
    "model.sigma",
    "model.offset",
    "model.lead",
    "model.v_lo",
    "model.v_hi",
    "model.v_amp",
    "model.delta",
    "model.eta_width",
    "model.rescale",
    "model.d_system",
    "model.d_apparatus",
    "model.n",
    "protocol.p_samples",
    "protocol.conjugate_pair",
    "protocol.conjugate_family",
    "audits.n_outcomes",
    "audits.alpha",
];

pub fn validate_config(cfg: &Config) -> Result<(), CliError> {
    cfg.check_known(KNOWN_KEYS)?;
    match cfg.get("units") {
        None | Some("natural") => Ok(()),
        Some("si") => Ok(()),
        Some(other) => Err(CliError::Config(format!(
            "units must be `natural` or `si`, got `{other}`"
        ))),
    }
}

pub fn seed_of(cfg: &Config, ov: &Overrides) -> Result<u64, CliError> {
    Ok(ov.seed.or(cfg.get_u64("seed")?).unwrap_or(0))
}

/// Construct the configured model.
pub fn build_model(cfg: &Config, ov: &Overrides) -> Result<Model, CliError> {
    validate_config(cfg)?;
    let opts = GridOptions {
        n_x: ov.grid_n,
        n_z: None,
        dt: ov.dt,
    };
    let experiment = cfg
        .get("experiment")
        .ok_or_else(|| CliError::Config("missing `experiment` key".into()))?;
    let model = match experiment {
        "standard" => {
            let w = cfg.get_f64("model.pointer_width")?.unwrap_or(0.5);
            let tau = cfg.get_f64("model.tau")?.unwrap_or(4.0 * w);
            standard_model(w, tau, &opts)?
        }
        "chiral" => {
            let big = cfg.get_f64("model.interaction_width")?.unwrap_or(1.0);
            let small = cfg.get_f64("model.packet_width")?.unwrap_or(1.0);
            let amp = cfg.get_f64("model.amplitude")?.unwrap_or(0.8);
            chiral_model(
                Bump::new(0.0, big, amp)?,
                Bump::unit(-small, 0.0)?,
                &opts,
            )?
        }
        "gaussian" => {
            let params = GaussianPacketParams {
                mass: cfg.get_f64("model.mass")?.unwrap_or(1.0),
                wave_number: cfg.get_f64("model.wave_number")?.unwrap_or(4.0),
                sigma: cfg.get_f64("model.sigma")?.unwrap_or(1.0),
                offset: cfg.get_f64("model.offset")?.unwrap_or(1.0),
                lead: cfg.get_f64("model.lead")?.unwrap_or(2.0),
            };
            let v = Bump::new(
                cfg.get_f64("model.v_lo")?.unwrap_or(0.5),
                cfg.get_f64("model.v_hi")?.unwrap_or(1.5),
                cfg.get_f64("model.v_amp")?.unwrap_or(1.0),
            )?;
            gaussian_model(&params, linalg::pauli_z(), v, &opts)?
        }
        "stern_gerlach" => {
            let delta = cfg.get_f64("model.delta")?.unwrap_or(1.0);
            let packet = cfg.get_f64("model.packet_width")?.unwrap_or(1.0);
            let amp = cfg.get_f64("model.amplitude")?.unwrap_or(0.6);
            let g = Bump::new(0.0, delta, amp)?;
            let eps = match cfg.get_f64("model.eta_width")? {
                Some(e) => e,
                None => g.integral() / 4.0,
            };
            let params = SternGerlachParams {
                g,
                xi: Bump::unit(-packet, 0.0)?,
                eta: Bump::unit(-eps, eps)?,
            };
            let c = cfg.get_f64("model.rescale")?.unwrap_or(1.0);
            stern_gerlach_2d(&params.rescaled(c)?, &opts)?
        }
        "random_finite" => {
            let d_s = cfg.get_u64("model.d_system")?.unwrap_or(2) as usize;
            let d_a = cfg.get_u64("model.d_apparatus")?.unwrap_or(3) as usize;
            random_finite_model(d_s, d_a, seed_of(cfg, ov)?)?
        }
        "conditional_rotation" => {
            conditional_rotation_model(cfg.get_f64("model.tau")?.unwrap_or(1.0))?
        }
        "conditional_shift" => {
            let n = cfg.get_u64("model.n")?.unwrap_or(3) as usize;
            conditional_shift_model(n, cfg.get_f64("model.tau")?.unwrap_or(1.0))?
        }
        "free" => free_model()?,
        other => {
            return Err(CliError::Config(format!(
                "unknown experiment `{other}`"
            )))
        }
    };
    Ok(model)
}

/// Interaction-free reference model with a coin meter: nothing is
/// disturbed and nothing is learned.
fn free_model() -> Result<Model, CliError> {
    let sigma0 = QuantumState::basis(CompositeSpace::single(2)?, 0)?;
    let fm = qswitch_core::models::FiniteModel::new(
        linalg::zeros(2, 2),
        linalg::pauli_z(),
        linalg::zeros(4, 4),
        sigma0,
    )?;
    let model = Model {
        name: "free".into(),
        tau: 1.0,
        t0: 0.0,
        kind: ModelKind::Finite(fm),
        pvm: Some(Pvm::computational(2)),
        meter: Some(Meter::Coin(2)),
        notes: vec![],
    };
    model.validate()?;
    Ok(model)
}

/// Full run report: measurement quantities plus the applicable audits.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub version: String,
    pub config_hash: String,
    pub seed: u64,
    pub measurement: measure::MeasurementRun,
    pub audits: Option<bounds::AuditReport>,
    pub conjugate_family: Option<measure::ConjugateFamily>,
    pub condition1_residual: Option<f64>,
    pub condition2_strength: Option<f64>,
}

/// Execute `run`: protocol, audits, artifacts.
pub fn run_experiment(cfg: &Config, ov: &Overrides) -> Result<Artifacts, CliError> {
    let model = build_model(cfg, ov)?;
    let seed = seed_of(cfg, ov)?;
    let p_samples = cfg.get_u64("protocol.p_samples")?.unwrap_or(65) as usize;
    let pair = match cfg.get_list_f64("protocol.conjugate_pair")? {
        Some(v) if v.len() == 2 => (v[0] as usize, v[1] as usize),
        Some(_) => {
            return Err(CliError::Config(
                "protocol.conjugate_pair expects two outcome indices".into(),
            ))
        }
        None => (0, 1),
    };
    let measurement = measure::run_protocol_with(
        &model,
        &measure::ProtocolOptions {
            p_samples,
            conjugate_pair: pair,
        },
    )?;
    // N-outcome Fourier-family check on request (finite models)
    let conjugate_family = match cfg.get("protocol.conjugate_family") {
        Some("true") => Some(measure::conjugate_family_profile(&model, model.tau)?),
        Some("false") | None => None,
        Some(other) => {
            return Err(CliError::Config(format!(
                "protocol.conjugate_family expects true/false, got `{other}`"
            )))
        }
    };

    // audit inputs available for this model
    let mut inputs = AuditInputs {
        tau: Some(model.tau),
        ..Default::default()
    };
    match &model.kind {
        ModelKind::Finite(f) => {
            inputs.delta_h_a =
                Some(qswitch_core::metrics::energy_fluctuation(&f.h_apparatus, &f.sigma0)?);
            inputs.v_norm = Some(linalg::operator_norm(&f.v));
        }
        ModelKind::Grid(g) => {
            inputs.delta_h_a = Some(g.delta_h_a()?);
            // multiplication-operator interactions have a finite norm
            if let qswitch_core::models::ApparatusFactor::Multiply(b) = &g.interaction.apparatus {
                inputs.v_norm = Some(b.amp.abs());
            }
        }
    }
    inputs.n_outcomes = cfg
        .get_u64("audits.n_outcomes")?
        .map(|n| n as usize)
        .or(model.pvm.as_ref().map(|p| p.n_outcomes()));
    inputs.p_error = measurement.p_error.as_ref().map(|w| w.value);
    // overall-width entries: spectral distribution of the full
    // Hamiltonian in the conjugate initial state (finite models)
    if let (Some(alphas), ModelKind::Finite(f), Some(pvm)) = (
        cfg.get_list_f64("audits.alpha")?,
        &model.kind,
        &model.pvm,
    ) {
        let v0 = pvm.range_basis(0)?[0].clone();
        let v1 = pvm.range_basis(1)?[0].clone();
        let plus = (&v0 + &v1).mapv(|z| z * C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0));
        let input = QuantumState::pure_normalized(CompositeSpace::single(pvm.dim())?, plus)?;
        let joint = f.joint_state(&input)?;
        let dist = qswitch_core::metrics::SpectralDistribution::from_hamiltonian_state(
            &f.h_total(),
            &joint,
        )?;
        for alpha in alphas {
            let width = qswitch_core::metrics::overall_width(&dist, alpha)?;
            inputs.delta_alpha.push((alpha, width));
        }
    }
    let mut audits = bounds::audit_all(&model.name, &inputs, &model.notes)?;

    // switching-device diagnostics
    let c1 = Some(conditions::condition1_residual(&model, 2.0 * model.tau, 25)?);
    let c2 = Some(conditions::condition2_strength(&model, model.tau, 12)?);

    // the trade-off bounds are conditional statements; downgrade entries
    // whose hypotheses this model does not meet instead of reporting a
    // bare failure
    let autonomous = c1.map(|r| r <= 1e-10).unwrap_or(false);
    let exact_measurement = measurement
        .p_error
        .as_ref()
        .map(|w| w.value <= 1e-6)
        .unwrap_or(false);
    for entry in &mut audits.entries {
        let needs_switch =
            entry.name.starts_with("energy-time") || entry.name.starts_with("overall-width");
        let needs_exact = !entry.name.contains("with-error")
            && (entry.name.starts_with("energy-time")
                || entry.name.starts_with("overall-width")
                || entry.name.starts_with("interaction"));
        let mut unmet = Vec::new();
        if needs_switch && !autonomous {
            unmet.push("the no-interaction condition fails before switch-on");
        }
        if needs_exact && !exact_measurement {
            unmet.push("the run is not an exact measurement of the observable");
        }
        if !unmet.is_empty() {
            entry.verdict = bounds::Verdict::Inapplicable;
            entry
                .notes
                .push(format!("hypothesis not met: {}", unmet.join("; ")));
        }
    }
    let audits = Some(audits);

    let report = RunReport {
        version: VERSION.into(),
        config_hash: cfg.content_hash(),
        seed,
        measurement: measurement.clone(),
        audits,
        conjugate_family,
        condition1_residual: c1,
        condition2_strength: c2,
    };

    let mut artifacts = Artifacts::default();
    artifacts.push(
        "report.json",
        serde_json::to_string_pretty(&report).expect("report serializes"),
    );
    // p-curve CSV + plot
    let mut curve_csv = String::from("t,p\n");
    for &(t, p) in &measurement.p_curve {
        curve_csv.push_str(&format!("{t:.16e},{p:.16e}\n"));
    }
    artifacts.push("p_curve.csv", curve_csv);
    if !measurement.p_curve.is_empty() {
        let plot = crate::svg::Plot {
            title: &format!("{} free-vs-full overlap", model.name),
            x_label: "t",
            y_label: "p(t)",
            series: vec![crate::svg::Series {
                label: "p(t)",
                points: measurement.p_curve.clone(),
            }],
            h_lines: vec![],
        };
        artifacts.push("p_curve.svg", plot.render());
    }
    // probability table
    let mut prob_csv = String::from("input,outcome,probability\n");
    for (label, row) in measurement
        .input_labels
        .iter()
        .zip(measurement.probabilities.iter())
    {
        for (n, p) in row.iter().enumerate() {
            prob_csv.push_str(&format!("{label},{n},{p:.16e}\n"));
        }
    }
    artifacts.push("probabilities.csv", prob_csv);
    // 1D grid models: wavefunction snapshot at τ
    if let ModelKind::Grid(g) = &model.kind {
        if g.axes.len() == 1 {
            let w0 = g.branch_wave(0, model.tau)?;
            artifacts.push("branch0_tau.csv", w0.csv_snapshot());
            let w1 = g.branch_wave(1, model.tau)?;
            artifacts.push("branch1_tau.csv", w1.csv_snapshot());
        }
    }
    Ok(artifacts)
}

/// Execute `sweep` over a declared sweepable parameter.
pub fn run_sweep(
    cfg: &Config,
    ov: &Overrides,
    param: &str,
    values: &[f64],
) -> Result<Artifacts, CliError> {
    validate_config(cfg)?;
    if values.is_empty() {
        return Err(CliError::Config("empty sweep value list".into()));
    }
    let experiment = cfg
        .get("experiment")
        .ok_or_else(|| CliError::Config("missing `experiment` key".into()))?;
    let sweepable = matches!(
        (experiment, param),
        ("stern_gerlach", "rescale") | ("gaussian", "wave_number")
    );
    if !sweepable {
        return Err(CliError::Config(format!(
            "parameter `{param}` is not sweepable for experiment `{experiment}`"
        )));
    }

    let mut rows = Vec::new();
    for &value in values {
        // rebuild the model at the swept value
        let model = match (experiment, param) {
            ("stern_gerlach", "rescale") => {
                let delta = cfg.get_f64("model.delta")?.unwrap_or(1.0);
                let packet = cfg.get_f64("model.packet_width")?.unwrap_or(1.0);
                let amp = cfg.get_f64("model.amplitude")?.unwrap_or(0.6);
                let g = Bump::new(0.0, delta, amp)?;
                let eps = match cfg.get_f64("model.eta_width")? {
                    Some(e) => e,
                    None => g.integral() / 4.0,
                };
                let params = SternGerlachParams {
                    g,
                    xi: Bump::unit(-packet, 0.0)?,
                    eta: Bump::unit(-eps, eps)?,
                };
                stern_gerlach_2d(
                    &params.rescaled(value)?,
                    &GridOptions {
                        n_x: ov.grid_n,
                        n_z: None,
                        dt: ov.dt,
                    },
                )?
            }
            ("gaussian", "wave_number") => {
                let params = GaussianPacketParams {
                    mass: cfg.get_f64("model.mass")?.unwrap_or(1.0),
                    wave_number: value,
                    sigma: cfg.get_f64("model.sigma")?.unwrap_or(1.0),
                    offset: cfg.get_f64("model.offset")?.unwrap_or(1.0),
                    lead: cfg.get_f64("model.lead")?.unwrap_or(2.0),
                };
                let v = Bump::new(
                    cfg.get_f64("model.v_lo")?.unwrap_or(0.5),
                    cfg.get_f64("model.v_hi")?.unwrap_or(1.5),
                    cfg.get_f64("model.v_amp")?.unwrap_or(1.0),
                )?;
                gaussian_model(&params, linalg::pauli_z(), v, &GridOptions::default())?
            }
            _ => unreachable!(),
        };
        let g = model.as_grid().expect("sweepables are grid models");
        let delta_h_a = g.delta_h_a()?;
        let product = model.tau * delta_h_a;
        let margin = bounds::audit_main(model.tau, delta_h_a).margin;
        // gaussian sweep: also report switch-on leakage vs its bound
        let leakage = if let GridExtras::Gaussian { params } = &g.extras {
            let w = g.sigma_free(0.0)?;
            Some((
                w.region_probability(|c| c[0] >= 0.0),
                params.chebyshev_bound(params.lead),
            ))
        } else {
            None
        };
        rows.push((value, model.tau, delta_h_a, product, margin, leakage));
    }

    let mut artifacts = Artifacts::default();
    let has_leak = rows.iter().any(|r| r.5.is_some());
    let mut csv = String::from(if has_leak {
        "value,tau,delta_h_a,product,margin_energy_time,leakage,chebyshev_bound\n"
    } else {
        "value,tau,delta_h_a,product,margin_energy_time\n"
    });
    for &(v, tau, dh, prod, margin, leak) in &rows {
        if let Some((l, b)) = leak {
            csv.push_str(&format!(
                "{v:.16e},{tau:.16e},{dh:.16e},{prod:.16e},{margin:.16e},{l:.16e},{b:.16e}\n"
            ));
        } else {
            csv.push_str(&format!(
                "{v:.16e},{tau:.16e},{dh:.16e},{prod:.16e},{margin:.16e}\n"
            ));
        }
    }
    artifacts.push("sweep.csv", csv);
    let plot = crate::svg::Plot {
        title: &format!("{experiment}: τ·ΔH_A along `{param}`"),
        x_label: param,
        y_label: "τ·ΔH_A",
        series: vec![crate::svg::Series {
            label: "product",
            points: rows.iter().map(|r| (r.0, r.3)).collect(),
        }],
        h_lines: vec![(std::f64::consts::FRAC_PI_4, "π/4")],
    };
    artifacts.push("sweep.svg", plot.render());

    #[derive(Serialize)]
    struct SweepReport<'a> {
        version: &'a str,
        config_hash: String,
        parameter: &'a str,
        rows: Vec<(f64, f64, f64, f64, f64)>,
    }
    let report = SweepReport {
        version: VERSION,
        config_hash: cfg.content_hash(),
        parameter: param,
        rows: rows.iter().map(|r| (r.0, r.1, r.2, r.3, r.4)).collect(),
    };
    artifacts.push(
        "sweep.json",
        serde_json::to_string_pretty(&report).expect("sweep serializes"),
    );
    Ok(artifacts)
}

/// Execute `audit` over externally supplied rows.
pub fn run_audit(text: &str) -> Result<Artifacts, CliError> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| CliError::Config("empty audit input".into()))?;
    let columns: Vec<&str> = header.split(',').map(|s| s.trim()).collect();
    let allowed = [
        "tau",
        "delta_h_a",
        "alpha",
        "delta_alpha",
        "v_norm",
        "n_outcomes",
        "p_error",
        "epsilon",
        "delta_h_box",
    ];
    for c in &columns {
        if !allowed.contains(c) {
            return Err(CliError::Config(format!("unknown audit column `{c}`")));
        }
    }
    let mut reports = Vec::new();
    let mut csv = String::from("row,entry,lhs,rhs,margin,verdict\n");
    for (row_idx, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').map(|s| s.trim()).collect();
        if fields.len() != columns.len() {
            return Err(CliError::Config(format!(
                "row {} has {} fields, header has {}",
                row_idx + 1,
                fields.len(),
                columns.len()
            )));
        }
        let mut inputs = AuditInputs::default();
        let mut alpha = None;
        let mut delta_alpha = None;
        for (c, f) in columns.iter().zip(fields.iter()) {
            let v: f64 = f.parse().map_err(|_| {
                CliError::Config(format!("row {}: `{f}` is not a number", row_idx + 1))
            })?;
            match *c {
                "tau" => inputs.tau = Some(v),
                "delta_h_a" => inputs.delta_h_a = Some(v),
                "alpha" => alpha = Some(v),
                "delta_alpha" => delta_alpha = Some(v),
                "v_norm" => inputs.v_norm = Some(v),
                "n_outcomes" => inputs.n_outcomes = Some(v as usize),
                "p_error" => inputs.p_error = Some(v),
                "epsilon" => inputs.epsilon = Some(v),
                "delta_h_box" => inputs.delta_h_box = Some(v),
                _ => unreachable!(),
            }
        }
        if let (Some(a), Some(da)) = (alpha, delta_alpha) {
            inputs.delta_alpha.push((a, da));
        }
        let report = bounds::audit_all(&format!("row-{}", row_idx + 1), &inputs, &[])?;
        for e in &report.entries {
            csv.push_str(&format!(
                "{},{},{:.16e},{:.16e},{:.16e},{:?}\n",
                row_idx + 1,
                e.name,
                e.lhs,
                e.rhs,
                e.margin,
                e.verdict
            ));
        }
        reports.push(report);
    }
    if reports.is_empty() {
        return Err(CliError::Config("audit input has no data rows".into()));
    }
    let mut artifacts = Artifacts::default();
    artifacts.push("audit.csv", csv);
    artifacts.push(
        "audit.json",
        serde_json::to_string_pretty(&reports).expect("audit serializes"),
    );
    Ok(artifacts)
}

/// Execute the no-go `probe`.
pub fn run_probe(
    d_system: usize,
    d_apparatus: usize,
    trials: usize,
    seed: u64,
) -> Result<(Artifacts, usize), CliError> {
    let report = conditions::nogo_probe(d_system, d_apparatus, trials, seed)?;
    let mut csv = String::from("trial,residual,strength,certified,verdict\n");
    for t in &report.trials {
        csv.push_str(&format!(
            "{},{:.16e},{:.16e},{},{}\n",
            t.trial, t.residual, t.strength, t.certified, t.verdict
        ));
    }
    let mut artifacts = Artifacts::default();
    artifacts.push("probe.csv", csv);
    artifacts.push(
        "probe.json",
        serde_json::to_string_pretty(&report).expect("probe serializes"),
    );
    Ok((artifacts, report.counterexamples))
}

/// Execute the `chain` locality scan.
pub fn run_chain(
    sites: usize,
    coupling: f64,
    t: f64,
    seed: u64,
) -> Result<Artifacts, CliError> {
    let chain = lattice::random_chain(sites, coupling, seed)?;
    let a = linalg::pauli_x();
    // product state |+⟩^⊗L for the box fluctuation
    let plus: ndarray::Array1<C64> =
        ndarray::array![C64::ONE, C64::ONE] / C64::new(2f64.sqrt(), 0.0);
    let site_states = vec![plus; sites];

    let mut rows = Vec::new();
    for radius in 1..sites {
        let eps = lattice::locality_error(&chain, &a, t, radius)?;
        let dh = lattice::box_energy_fluctuation(&chain, 0, radius + 1, &site_states)?;
        let entry = bounds::audit_lattice(t, dh, eps.min(1.0))?;
        rows.push((radius, eps, dh, entry));
    }
    let mut csv = String::from("radius,locality_error,delta_h_box,margin,verdict\n");
    for (radius, eps, dh, entry) in &rows {
        csv.push_str(&format!(
            "{radius},{eps:.16e},{dh:.16e},{:.16e},{:?}\n",
            entry.margin, entry.verdict
        ));
    }
    let mut artifacts = Artifacts::default();
    artifacts.push("chain.csv", csv);
    let plot = crate::svg::Plot {
        title: "locality error vs box radius",
        x_label: "radius",
        y_label: "‖α_t(A) − α_t^Λ(A)‖",
        series: vec![crate::svg::Series {
            label: "error",
            points: rows.iter().map(|r| (r.0 as f64, r.1)).collect(),
        }],
        h_lines: vec![],
    };
    artifacts.push("chain.svg", plot.render());
    #[derive(Serialize)]
    struct ChainReport {
        version: String,
        sites: usize,
        coupling: f64,
        time: f64,
        seed: u64,
        rows: Vec<(usize, f64, f64, bounds::AuditEntry)>,
    }
    let report = ChainReport {
        version: VERSION.into(),
        sites,
        coupling,
        time: t,
        seed,
        rows,
    };
    artifacts.push(
        "chain.json",
        serde_json::to_string_pretty(&report).expect("chain serializes"),
    );
    Ok(artifacts)
}
