use std::fmt::Write as _;

use garbage_game::{audit_trajectory, convergence_report, run, Threshold, Trajectory};
use serde::{Serialize, Serializer};

use crate::config::RunConfig;
use crate::format::{json_f64, raw, sig17};
use crate::{write_file, CliError, Result};

/// Summary JSON of one `simulate` run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub n: usize,
    #[serde(serialize_with = "threshold_json")]
    pub epsilon: Threshold,
    pub steps_run: usize,
    pub converged: bool,
    #[serde(serialize_with = "json_f64")]
    pub limit_estimate: f64,
    #[serde(serialize_with = "json_f64")]
    pub initial_average: f64,
    #[serde(serialize_with = "json_f64")]
    pub max_abs_dev_from_average: f64,
    #[serde(serialize_with = "json_f64")]
    pub conservation_error: f64,
    pub trivialization_time: Option<usize>,
    pub is_star: bool,
    pub is_connected: bool,
}

fn threshold_json<S: Serializer>(eps: &Threshold, s: S) -> std::result::Result<S::Ok, S::Error> {
    match eps {
        Threshold::Infinite => s.serialize_str("inf"),
        Threshold::Finite(e) => raw(sig17(*e), s),
    }
}

#[derive(Debug, Clone)]
pub struct SimulateOutput {
    pub summary: Summary,
    pub summary_json: String,
    pub csv: String,
}

/// Runs the dynamic described by `config`, writes the CSV and summary files
/// it names, and returns everything it produced. Non-convergence is reported
/// in the summary, never as an error.
pub fn cmd_simulate(config: &RunConfig) -> Result<SimulateOutput> {
    if config.convergence_tol.is_nan() || config.convergence_tol <= 0.0 {
        return Err(garbage_game::Error::InvalidTolerance(config.convergence_tol).into());
    }
    let g = config.graph.load(config.seed)?;
    let s0 = config.init.realize(g.order(), config.seed)?;
    let traj = run(&g, &s0, config.epsilon, config.max_steps, config.convergence_tol)?;

    if config.validate {
        let problems = audit_trajectory(&g, &traj)?;
        if let Some((t, msg)) = problems.first() {
            return Err(CliError::Validation(format!(
                "step {t}: {msg} ({} violation(s) total)",
                problems.len()
            )));
        }
    }

    let report = convergence_report(&traj, &g, config.convergence_tol)?;
    let summary = Summary {
        n: g.order(),
        epsilon: config.epsilon,
        steps_run: report.steps_run,
        converged: report.converged,
        limit_estimate: report.limit_estimate,
        initial_average: report.initial_average,
        max_abs_dev_from_average: report.max_deviation_from_average,
        conservation_error: report.conservation_error,
        trivialization_time: report.trivialization_time,
        is_star: g.is_star(),
        is_connected: g.is_connected(),
    };
    let mut summary_json = serde_json::to_string_pretty(&summary)?;
    summary_json.push('\n');
    let csv = trajectory_csv(&traj);

    if let Some(path) = &config.csv_out {
        write_file(path, csv.as_bytes())?;
    }
    if let Some(path) = &config.summary_out {
        write_file(path, summary_json.as_bytes())?;
    }
    Ok(SimulateOutput {
        summary,
        summary_json,
        csv,
    })
}

/// `t,x_1,...,x_n,z,active_edges,max_diff`, one row per recorded state.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let n = traj.initial().len();
    let mut out = String::from("t");
    for i in 1..=n {
        write!(out, ",x_{i}").unwrap();
    }
    out.push_str(",z,active_edges,max_diff\n");
    for (state, diag) in traj.states().iter().zip(traj.diagnostics()) {
        write!(out, "{}", state.time()).unwrap();
        for &v in state.values() {
            write!(out, ",{}", sig17(v)).unwrap();
        }
        writeln!(
            out,
            ",{},{},{}",
            sig17(diag.z),
            diag.active_edges,
            sig17(diag.max_diff)
        )
        .unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{GraphSource, InitSource};
    use garbage_game::GraphKind;

    fn config(kind: GraphKind, init: &str) -> RunConfig {
        RunConfig::new(
            GraphSource::Generate(kind),
            InitSource::parse_list(init).unwrap(),
        )
    }

    #[test]
    fn cycle_converges_to_average() {
        let mut c = config(GraphKind::Cycle(4), "0,1,2,3");
        c.convergence_tol = 1e-9;
        let out = cmd_simulate(&c).unwrap();
        assert!(out.summary.converged);
        assert!((out.summary.limit_estimate - 1.5).abs() < 1e-12);
        assert_eq!(out.summary.trivialization_time, Some(0));
        assert!(out.summary_json.contains("\"epsilon\": \"inf\""));
    }

    #[test]
    fn swap_orbit_does_not_converge() {
        let mut c = config(GraphKind::Path(3), "0,1,5");
        c.epsilon = Threshold::Finite(2.0);
        c.max_steps = 50;
        c.validate = true;
        let out = cmd_simulate(&c).unwrap();
        assert!(!out.summary.converged);
        assert_eq!(out.summary.steps_run, 50);
        assert_eq!(out.summary.trivialization_time, None);
        assert!(out.summary_json.contains("\"trivialization_time\": null"));
        assert!(out.summary_json.contains("\"epsilon\": 2.0"));
        let lines: Vec<&str> = out.csv.lines().collect();
        assert_eq!(lines[0], "t,x_1,x_2,x_3,z,active_edges,max_diff");
        assert_eq!(lines.len(), 52);
        assert_eq!(lines[1], "0,0.0,1.0,5.0,18.0,1,5.0");
        assert_eq!(lines[2], "1,1.0,0.0,5.0,18.0,1,5.0");
    }

    #[test]
    fn negative_initial_amount() {
        let err = cmd_simulate(&config(GraphKind::Path(3), "0,-1,2")).unwrap_err();
        assert!(err.to_string().contains("negative garbage"));
    }

    #[test]
    fn length_mismatch() {
        assert!(cmd_simulate(&config(GraphKind::Path(4), "0,1,2")).is_err());
    }
}
