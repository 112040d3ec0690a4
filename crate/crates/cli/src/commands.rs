use std::io::Write;
use std::path::Path;

use deterrence_core::oracle::{oracle_spne, oracle_subgame_profit};
use deterrence_core::{Market, ModelError, ModelParams, SpneCheck, SubgameCheck, UpperRoot};
use serde::Serialize;

use crate::config::{Axis, EntryCosts, Format, RunConfig};
use crate::format::{sig9, SolveRecord, SWEEP_HEADER};
use crate::CliError;

/// Number of intervals in the figure's output grid.
pub const FIGURE_INTERVALS: usize = 300;
/// Entry cost drawn in the figure when none is given.
pub const FIGURE_ENTRY_COST: f64 = 5.0;

const CHECK_OUTPUTS: usize = 100;
const CHECK_ENTRY_COSTS: usize = 25;

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        context: format!("writing {}", path.display()),
        source,
    })
}

fn emit(cfg: &RunConfig, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &cfg.output_path {
        Some(path) => write_file(path, text),
        None => stdout.write_all(text.as_bytes()).map_err(|source| CliError::Io {
            context: "writing stdout".into(),
            source,
        }),
    }
}

fn no_sweep_axis(cfg: &RunConfig, command: &str) -> Result<(), CliError> {
    match cfg.sweep_axis {
        Some(_) => Err(CliError::Usage(format!(
            "{command} takes no --sweep-phi/--sweep-theta"
        ))),
        None => Ok(()),
    }
}

pub fn solve(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    no_sweep_axis(cfg, "solve")?;
    let entry_cost = match cfg.entry_cost {
        Some(EntryCosts::Single(r)) => r,
        Some(EntryCosts::Range(_)) => {
            return Err(CliError::Usage(
                "solve takes a single --entry-cost; use sweep for ranges".into(),
            ))
        }
        None => return Err(CliError::Usage("solve needs --entry-cost".into())),
    };
    let market = cfg.market()?;
    let record = SolveRecord::new(market.params(), &market.solve(entry_cost)?);
    let text = match cfg.output_format {
        None => record.text(),
        Some(Format::Csv) => format!("{SWEEP_HEADER}\n{}", record.csv_row()),
        Some(Format::Jsonl) => record.json_line(),
    };
    emit(cfg, &(text + "\n"), stdout)
}

/// Rows ordered with the sweep axis outer and the entry cost inner.
pub fn sweep_records(cfg: &RunConfig) -> Result<Vec<SolveRecord>, CliError> {
    let costs = match cfg.entry_cost {
        Some(c) => c.points(),
        None => {
            return Err(CliError::Usage(
                "sweep needs --entry-cost-range or --entry-cost".into(),
            ))
        }
    };
    let param_sets: Vec<ModelParams> = match cfg.sweep_axis {
        None => vec![cfg.params],
        Some((axis, range)) => range
            .points()
            .into_iter()
            .map(|v| {
                let mut p = cfg.params;
                match axis {
                    Axis::Phi => p.phi = v,
                    Axis::Theta => p.theta = v,
                }
                p
            })
            .collect(),
    };
    let mut rows = Vec::with_capacity(costs.len() * param_sets.len());
    for params in param_sets {
        let market = Market::new(params)?;
        for &r in &costs {
            rows.push(SolveRecord::new(&params, &market.solve(r)?));
        }
    }
    Ok(rows)
}

pub fn sweep(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    let rows = sweep_records(cfg)?;
    let mut text = String::new();
    match cfg.output_format.unwrap_or(Format::Csv) {
        Format::Csv => {
            text.push_str(SWEEP_HEADER);
            text.push('\n');
            for r in &rows {
                text.push_str(&r.csv_row());
                text.push('\n');
            }
        }
        Format::Jsonl => {
            for r in &rows {
                text.push_str(&r.json_line());
                text.push('\n');
            }
        }
    }
    emit(cfg, &text, stdout)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub x: f64,
    pub pi_entrant: f64,
    pub pi_deterrence: f64,
    pub pi_accommodation: f64,
    pub pi2_monopoly: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Marker {
    pub marker: &'static str,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureData {
    pub entry_cost: f64,
    pub curves: Vec<CurvePoint>,
    pub markers: Vec<Marker>,
}

pub fn figure_data(market: &Market, entry_cost: f64) -> Result<FigureData, CliError> {
    let k = market.derived_constants();
    let x_max = k.x_cap;
    let curves = (0..=FIGURE_INTERVALS)
        .map(|i| {
            let x = x_max * (i as f64 / FIGURE_INTERVALS as f64);
            Ok(CurvePoint {
                x,
                pi_entrant: market.entrant_gross_profit(x)?,
                pi_deterrence: market.two_period_monopoly_profit(x)?,
                pi_accommodation: market.period1_profit(x)?,
                pi2_monopoly: market.monopoly_second_period_profit(x)?,
            })
        })
        .collect::<Result<Vec<_>, ModelError>>()?;

    let mut markers = vec![
        Marker {
            marker: "entry_cost_start",
            x: 0.0,
            y: entry_cost,
        },
        Marker {
            marker: "entry_cost_end",
            x: x_max,
            y: entry_cost,
        },
    ];
    let regions = match market.entry_regions(entry_cost) {
        Ok(r) => Some(r),
        Err(ModelError::GenericEntrant) => None,
        Err(e) => return Err(e.into()),
    };
    let x_low = regions.as_ref().and_then(|r| r.x_low);
    let x_high = regions.as_ref().and_then(|r| match r.x_high {
        Some(UpperRoot::Finite(x)) if x <= x_max => Some(x),
        _ => None,
    });
    if let Some(x) = x_low {
        markers.push(Marker {
            marker: "x_low_entry_cost",
            x,
            y: entry_cost,
        });
        markers.push(Marker {
            marker: "x_low_axis",
            x,
            y: 0.0,
        });
    }
    if let Some(x) = x_high {
        markers.push(Marker {
            marker: "x_high_entry_cost",
            x,
            y: entry_cost,
        });
        markers.push(Marker {
            marker: "x_high_axis",
            x,
            y: 0.0,
        });
    }
    let det = market.deterrence_optimum(entry_cost)?;
    markers.push(Marker {
        marker: "deterrence_optimum",
        x: det.x,
        y: det.profit,
    });
    markers.push(Marker {
        marker: "monopoly_output",
        x: k.x_monopoly,
        y: market.two_period_monopoly_profit(k.x_monopoly)?,
    });
    markers.push(Marker {
        marker: "static_optimum",
        x: k.x_static,
        y: market.period1_profit(k.x_static)?,
    });
    if let Some(x) = x_high {
        markers.push(Marker {
            marker: "accommodation_upper",
            x,
            y: market.period1_profit(x)?,
        });
    }
    if let Ok(peak) = market.entrant_profit_peak() {
        markers.push(Marker {
            marker: "entrant_peak",
            x: peak.x,
            y: peak.profit,
        });
    }
    Ok(FigureData {
        entry_cost,
        curves,
        markers,
    })
}

impl FigureData {
    pub fn curves_csv(&self) -> String {
        let mut s = String::from("x,pi_entrant,pi_deterrence,pi_accommodation,pi2_monopoly\n");
        for p in &self.curves {
            let row = [
                p.x,
                p.pi_entrant,
                p.pi_deterrence,
                p.pi_accommodation,
                p.pi2_monopoly,
            ]
            .map(sig9);
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }

    pub fn markers_csv(&self) -> String {
        let mut s = String::from("marker,x,y\n");
        for m in &self.markers {
            s.push_str(&format!("{},{},{}\n", m.marker, sig9(m.x), sig9(m.y)));
        }
        s
    }

    fn jsonl<T: Serialize>(items: &[T]) -> String {
        items
            .iter()
            .map(|i| serde_json::to_string(i).expect("serializable") + "\n")
            .collect()
    }
}

pub fn figure(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    no_sweep_axis(cfg, "figure")?;
    let entry_cost = match cfg.entry_cost {
        None => FIGURE_ENTRY_COST,
        Some(EntryCosts::Single(r)) => r,
        Some(EntryCosts::Range(_)) => {
            return Err(CliError::Usage("figure takes a single --entry-cost".into()))
        }
    };
    let market = cfg.market()?;
    let data = figure_data(&market, entry_cost)?;
    let (curves, markers, ext) = match cfg.output_format.unwrap_or(Format::Csv) {
        Format::Csv => (data.curves_csv(), data.markers_csv(), "csv"),
        Format::Jsonl => (
            FigureData::jsonl(&data.curves),
            FigureData::jsonl(&data.markers),
            "jsonl",
        ),
    };
    match &cfg.output_path {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
                context: format!("creating {}", dir.display()),
                source,
            })?;
            write_file(&dir.join(format!("curves.{ext}")), &curves)?;
            write_file(&dir.join(format!("markers.{ext}")), &markers)
        }
        None => emit(cfg, &format!("{curves}\n{markers}"), stdout),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "check", rename_all = "lowercase")]
pub enum CheckLine {
    Subgame {
        x: f64,
        closed_form: f64,
        brute_force: f64,
        discrepancy: f64,
        tolerance: f64,
        incumbent_profit: f64,
        pass: bool,
    },
    Spne {
        #[serde(rename = "R")]
        entry_cost: f64,
        regime: &'static str,
        oracle_regime: &'static str,
        x_star: f64,
        oracle_x: f64,
        closed_form: f64,
        brute_force: f64,
        discrepancy: f64,
        tolerance: f64,
        pass: bool,
    },
}

impl CheckLine {
    fn from_subgame(x: f64, s: &SubgameCheck) -> Self {
        CheckLine::Subgame {
            x,
            closed_form: s.report.closed_form_value,
            brute_force: s.report.brute_force_value,
            discrepancy: s.report.discrepancy,
            tolerance: s.report.tolerance_used,
            incumbent_profit: s.incumbent_profit,
            pass: s.report.pass && s.incumbent_profit == 0.0,
        }
    }

    fn from_spne(s: &SpneCheck) -> Self {
        CheckLine::Spne {
            entry_cost: s.entry_cost,
            regime: s.solver_regime.as_str(),
            oracle_regime: s.oracle_regime.as_str(),
            x_star: s.solver_x,
            oracle_x: s.oracle_x,
            closed_form: s.report.closed_form_value,
            brute_force: s.report.brute_force_value,
            discrepancy: s.report.discrepancy,
            tolerance: s.report.tolerance_used,
            pass: s.pass,
        }
    }

    pub fn pass(&self) -> bool {
        match self {
            CheckLine::Subgame { pass, .. } | CheckLine::Spne { pass, .. } => *pass,
        }
    }

    pub fn text(&self) -> String {
        let verdict = if self.pass() { "PASS" } else { "FAIL" };
        match self {
            CheckLine::Subgame { x, closed_form, brute_force, discrepancy, tolerance, incumbent_profit, .. } => {
                format!(
                    "subgame x={} closed={} brute={} diff={} tol={} incumbent={} {verdict}",
                    sig9(*x),
                    sig9(*closed_form),
                    sig9(*brute_force),
                    sig9(*discrepancy),
                    sig9(*tolerance),
                    sig9(*incumbent_profit)
                )
            }
            CheckLine::Spne {
                entry_cost,
                regime,
                oracle_regime,
                x_star,
                oracle_x,
                closed_form,
                brute_force,
                discrepancy,
                tolerance,
                ..
            } => format!(
                "spne R={} regime={regime} oracle={oracle_regime} x={} oracle_x={} closed={} brute={} diff={} tol={} {verdict}",
                sig9(*entry_cost),
                sig9(*x_star),
                sig9(*oracle_x),
                sig9(*closed_form),
                sig9(*brute_force),
                sig9(*discrepancy),
                sig9(*tolerance)
            ),
        }
    }
}

/// Subgame checks on interior outputs, then SPNE checks over entry costs.
pub fn check_lines(cfg: &RunConfig) -> Result<Vec<CheckLine>, CliError> {
    let market = cfg.market()?;
    let grid = cfg.grid(&market);
    grid.validate()?;
    let k = market.derived_constants();

    let upper = market.x_entrant_exhausted().map_or(k.x_cap, |e| e.min(k.x_cap));
    let mut lines = Vec::new();
    for i in 1..=CHECK_OUTPUTS {
        let x = upper * (i as f64 / (CHECK_OUTPUTS + 1) as f64);
        lines.push(CheckLine::from_subgame(
            x,
            &oracle_subgame_profit(&market, x, &grid)?,
        ));
    }

    let costs = match cfg.entry_cost {
        Some(c) => c.points(),
        None => {
            let scale = if k.pi_e_max > 0.0 {
                k.pi_e_max
            } else {
                market.margin().powi(2) / market.params().beta
            };
            let hi = 1.2 * scale;
            let mut v: Vec<f64> = (0..CHECK_ENTRY_COSTS)
                .map(|i| hi * (i as f64 / (CHECK_ENTRY_COSTS - 1) as f64))
                .collect();
            v.push(k.r_bar);
            v.sort_by(f64::total_cmp);
            v.dedup();
            v
        }
    };
    for r in costs {
        lines.push(CheckLine::from_spne(&oracle_spne(&market, r, &grid)?));
    }
    Ok(lines)
}

pub fn check(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    no_sweep_axis(cfg, "check")?;
    let lines = check_lines(cfg)?;
    let failed = lines.iter().filter(|l| !l.pass()).count();
    let mut text = String::new();
    match cfg.output_format {
        None => {
            for l in &lines {
                text.push_str(&l.text());
                text.push('\n');
            }
            text.push_str(&format!("checks={} failed={failed}\n", lines.len()));
        }
        Some(Format::Jsonl) => {
            for l in &lines {
                text.push_str(&serde_json::to_string(l).expect("serializable"));
                text.push('\n');
            }
        }
        Some(Format::Csv) => return Err(CliError::Usage("check writes text or jsonl".into())),
    }
    emit(cfg, &text, stdout)?;
    verdict(&lines)
}

/// Error carrying the first failing line, if any.
pub fn verdict(lines: &[CheckLine]) -> Result<(), CliError> {
    let failed = lines.iter().filter(|l| !l.pass()).count();
    match lines.iter().find(|l| !l.pass()) {
        Some(first) => Err(CliError::OracleFailure(format!(
            "{failed} failed; first: {}",
            first.text()
        ))),
        None => Ok(()),
    }
}
