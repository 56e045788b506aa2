use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};

use manning_rosen::golden::{audit_table, AlphaColumn, CellAudit, ERRATUM_THRESHOLD, TABLE_DIMS};
use manning_rosen::spectrum::{critical_coupling, degenerate_partners, energy, spectrum_entry_unchecked};
use manning_rosen::wavefun::radial_wavefunction;
use manning_rosen::{state_energy, CentrifugalMode, Error, GridKind, PotentialParams, QuantumState, RadialGrid, Units};
use rayon::prelude::*;
use serde_json::{Map, Value};

use crate::cli::{
    Command, CriticalArgs, DegeneracyArgs, GridArg, GridArgs, ModeArg, OracleArgs, OutputArgs, PhysicsArgs,
    SpectrumArgs, StateArgs, TableArgs, WavefunctionArgs,
};
use crate::error::{CliError, CliResult};
use crate::report::{float, Cell, Report, Section};

pub fn dispatch(command: Command) -> CliResult<()> {
    match command {
        Command::Spectrum(a) => emit(&a.output, cmd_spectrum(&a)?),
        Command::Table(a) => emit(&a.output, cmd_table(&a)?),
        Command::Wavefunction(a) => emit(&a.output, cmd_wavefunction(&a)?),
        Command::Oracle(a) => emit(&a.output, cmd_oracle(&a)?),
        Command::Degeneracy(a) => emit(&a.output, cmd_degeneracy(&a)?),
        Command::CriticalCoupling(a) => emit(&a.output, cmd_critical(&a)?),
    }
}

fn emit(output: &OutputArgs, report: Report) -> CliResult<()> {
    let precision = usize::from(output.precision);
    match &output.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            report.render(&mut w, output.format, precision)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            report.render(&mut w, output.format, precision)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// One parameter set, remembering the `1/b` it was requested with.
#[derive(Debug, Clone, Copy)]
struct ParamSet {
    inv_b: f64,
    params: PotentialParams,
}

fn resolve_params(p: &PhysicsArgs) -> CliResult<Vec<ParamSet>> {
    let alpha = p.alpha.ok_or_else(|| usage("--alpha is required"))?;
    let units = Units::new(p.hbar, p.mu)?;
    if p.coupling.is_none() && p.a_over_b.is_none() {
        return Err(usage("one of --A or --A-over-b is required"));
    }
    let lengths: Vec<(f64, f64)> = if !p.b.is_empty() {
        p.b.iter().map(|&b| (b, 1.0 / b)).collect()
    } else if !p.inv_b.is_empty() {
        p.inv_b.iter().map(|&ib| (1.0 / ib, ib)).collect()
    } else {
        return Err(usage("one of --b or --inv-b is required"));
    };
    lengths
        .into_iter()
        .map(|(b, inv_b)| {
            let params = match (p.coupling, p.a_over_b) {
                (Some(a), _) => PotentialParams::with_units(a, alpha, b, units)?,
                (None, Some(ratio)) if p.b.is_empty() => PotentialParams::from_ratio(ratio, inv_b, alpha, units)?,
                (None, Some(ratio)) => PotentialParams::with_units(ratio * b, alpha, b, units)?,
                (None, None) => unreachable!(),
            };
            Ok(ParamSet { inv_b, params })
        })
        .collect()
}

fn any_physics(p: &PhysicsArgs) -> bool {
    p.alpha.is_some() || p.coupling.is_some() || p.a_over_b.is_some() || !p.b.is_empty() || !p.inv_b.is_empty()
}

/// `"3"`, `"0..4"` (inclusive) or `"1,3,5"`.
fn parse_numbers(flag: &str, text: &str) -> CliResult<Vec<u32>> {
    let bad = || usage(format!("--{flag}: expected an integer, a range a..b or a list, got {text:?}"));
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim) {
        if let Some((lo, hi)) = part.split_once("..") {
            let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
            let hi: u32 = hi.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
            if lo > hi {
                return Err(bad());
            }
            out.extend(lo..=hi);
        } else {
            out.push(part.parse().map_err(|_| bad())?);
        }
    }
    Ok(out)
}

enum Selection {
    Explicit(Vec<QuantumState>),
    /// Every bound `n` for each listed `l`.
    AllBound { ls: Vec<u32>, dim: u32 },
}

fn resolve_states(a: &StateArgs, default_n: Option<&str>) -> CliResult<Selection> {
    if !a.states.is_empty() {
        let states = a
            .states
            .iter()
            .map(|label| QuantumState::from_label(label, a.dim))
            .collect::<manning_rosen::Result<Vec<_>>>()?;
        return Ok(Selection::Explicit(states));
    }
    let ls = parse_numbers("l", a.l.as_deref().unwrap_or("0"))?;
    match a.n.as_deref().or(default_n) {
        Some(text) => {
            let ns = parse_numbers("n", text)?;
            let mut states = Vec::new();
            for &l in &ls {
                for &n in &ns {
                    states.push(QuantumState::new(n, l, a.dim)?);
                }
            }
            Ok(Selection::Explicit(states))
        }
        None => {
            QuantumState::new(0, 0, a.dim)?;
            Ok(Selection::AllBound { ls, dim: a.dim })
        }
    }
}

fn states_for(selection: &Selection, params: &PotentialParams) -> CliResult<Vec<QuantumState>> {
    match selection {
        Selection::Explicit(states) => Ok(states.clone()),
        Selection::AllBound { ls, dim } => {
            let mut out = Vec::new();
            for &l in ls {
                for n in 0.. {
                    let state = QuantumState::new(n, l, *dim)?;
                    match energy(params, &state) {
                        Ok(_) => out.push(state),
                        Err(Error::Unbound { .. } | Error::ShapeParameter { .. }) => break,
                        Err(e) => return Err(e.into()),
                    }
                }
            }
            Ok(out)
        }
    }
}

fn label(state: &QuantumState) -> String {
    state.label().unwrap_or_else(|| format!("n{}l{}", state.n, state.l))
}

fn state_cells(state: &QuantumState) -> Vec<Cell> {
    vec![
        Cell::Text(label(state)),
        Cell::Int(i64::from(state.n)),
        Cell::Int(i64::from(state.l)),
        Cell::Int(i64::from(state.dim)),
    ]
}

fn cmd_spectrum(a: &SpectrumArgs) -> CliResult<Report> {
    let selection = resolve_states(&a.states, None)?;
    let sets = resolve_params(&a.physics)?;
    let mut section = Section::new(&["state", "n", "l", "D", "inv_b", "energy", "epsilon", "eta", "status"]);
    for set in &sets {
        let states = states_for(&selection, &set.params)?;
        if states.is_empty() {
            eprintln!("note: no bound states at 1/b = {}", set.inv_b);
        }
        for state in states {
            let mut row = state_cells(&state);
            row.push(Cell::Num(set.inv_b));
            match spectrum_entry_unchecked(&set.params, &state) {
                Ok(entry) => {
                    let bound = entry.epsilon > 0.0;
                    row.push(if bound { Cell::Num(entry.energy) } else { Cell::Missing });
                    row.push(Cell::Num(entry.epsilon));
                    row.push(Cell::Num(entry.eta));
                    row.push(Cell::Text(if bound { "bound" } else { "unbound" }.into()));
                }
                Err(Error::ShapeParameter { .. }) => {
                    row.extend([Cell::Missing, Cell::Missing, Cell::Missing, Cell::Text("undefined".into())]);
                }
                Err(e) => return Err(e.into()),
            }
            section.push(row);
        }
    }
    Ok(Report::single(section))
}

fn cell_key(audit: &CellAudit) -> String {
    format!(
        "{}/inv_b={:.3}/alpha={}/D={}",
        audit.cell.label,
        audit.cell.inv_b,
        audit.cell.alpha.label(),
        audit.cell.state.dim
    )
}

fn cmd_table(_a: &TableArgs) -> CliResult<Report> {
    let audit = audit_table()?;

    let mut columns = vec!["state".to_string(), "inv_b".to_string()];
    for dim in TABLE_DIMS {
        for alpha in AlphaColumn::ALL {
            columns.push(format!("D={dim} a={}", alpha.label()));
        }
    }
    let mut grid = Section { title: Some("recomputed energies".into()), columns, rows: Vec::new() };
    for chunk in audit.chunks(TABLE_DIMS.len() * AlphaColumn::ALL.len()) {
        let mut row = vec![Cell::Text(chunk[0].cell.label.clone()), Cell::Num(chunk[0].cell.inv_b)];
        row.extend(chunk.iter().map(|c| Cell::Num(c.recomputed)));
        grid.rows.push(row);
    }

    let mut cells = Section::new(&[
        "row",
        "state",
        "inv_b",
        "D",
        "alpha",
        "published",
        "recomputed",
        "abs_diff",
        "suspected_erratum",
    ])
    .titled(format!("cells differing by more than {ERRATUM_THRESHOLD:e}"));
    let mut all = Section { title: None, ..cells.clone() };
    let mut json = Map::new();
    for c in &audit {
        let row = vec![
            Cell::Int(c.cell.row as i64),
            Cell::Text(c.cell.label.clone()),
            Cell::Num(c.cell.inv_b),
            Cell::Int(i64::from(c.cell.state.dim)),
            Cell::Text(c.cell.alpha.label().into()),
            Cell::Num(c.cell.value),
            Cell::Num(c.recomputed),
            Cell::Sci(c.abs_diff),
            Cell::Text(c.suspected_erratum.to_string()),
        ];
        if c.suspected_erratum {
            cells.push(row.clone());
        }
        all.push(row);
        let entry: Map<String, Value> = [
            ("row".to_string(), Value::from(c.cell.row)),
            ("published".to_string(), float(c.cell.value)),
            ("recomputed".to_string(), float(c.recomputed)),
            ("abs_diff".to_string(), float(c.abs_diff)),
            ("suspected_erratum".to_string(), Value::from(c.suspected_erratum)),
        ]
        .into_iter()
        .collect();
        json.insert(cell_key(c), Value::Object(entry));
    }
    let flagged = cells.rows.len();
    Ok(Report {
        sections: vec![grid, cells],
        footer: vec![
            ("cells".into(), Cell::Int(audit.len() as i64)),
            ("suspected_errata".into(), Cell::Int(flagged as i64)),
        ],
        csv: Some(all),
        json: Some(Value::Object(json)),
    })
}

fn single_state(sets: &[ParamSet], selection: &Selection) -> CliResult<(ParamSet, QuantumState)> {
    if sets.len() != 1 {
        return Err(usage("wavefunction needs exactly one parameter set"));
    }
    let set = sets[0];
    let states = states_for(selection, &set.params)?;
    match states.as_slice() {
        [state] => Ok((set, *state)),
        _ => Err(usage(format!("wavefunction needs exactly one state, selection gives {}", states.len()))),
    }
}

fn cmd_wavefunction(a: &WavefunctionArgs) -> CliResult<Report> {
    if a.samples == 0 {
        return Err(usage("--samples must be positive"));
    }
    let selection = resolve_states(&a.states, Some("0"))?;
    let sets = resolve_params(&a.physics)?;
    let (set, state) = single_state(&sets, &selection)?;
    let solution = radial_wavefunction(&set.params, &state)?;
    let norm = solution.norm_by_quadrature()?;
    let mut section = Section::new(&["r", "z", "g", "g2"]);
    for s in solution.sample(a.samples)? {
        section.push(vec![Cell::Sci(s.r), Cell::Sci(s.z), Cell::Sci(s.g), Cell::Sci(s.g2)]);
    }
    let mut report = Report::single(section);
    report.footer = vec![
        ("state".into(), Cell::Text(label(&state))),
        ("n".into(), Cell::Int(i64::from(state.n))),
        ("l".into(), Cell::Int(i64::from(state.l))),
        ("D".into(), Cell::Int(i64::from(state.dim))),
        ("energy".into(), Cell::Num(solution.entry.energy)),
        ("epsilon".into(), Cell::Num(solution.entry.epsilon)),
        ("eta".into(), Cell::Num(solution.entry.eta)),
        ("norm_constant".into(), Cell::Sci(solution.norm_constant)),
        ("norm".into(), Cell::Num(norm)),
        ("node_count".into(), Cell::Int(i64::from(solution.node_count))),
    ];
    Ok(report)
}

fn oracle_grid(g: &GridArgs, b: f64, epsilon: f64) -> CliResult<RadialGrid> {
    let base = RadialGrid::for_decay(b, epsilon)?;
    let kind = match g.grid {
        GridArg::Log => GridKind::Logarithmic,
        GridArg::Uniform => GridKind::Uniform,
    };
    Ok(RadialGrid::new(
        g.r_min.unwrap_or(base.r_min),
        g.r_max.unwrap_or(base.r_max),
        g.points.unwrap_or(base.n_points),
        kind,
    )?)
}

struct OracleRow {
    cells: Vec<Cell>,
    warnings: Vec<String>,
}

fn oracle_row(a: &OracleArgs, set: &ParamSet, state: &QuantumState) -> CliResult<OracleRow> {
    let entry = energy(&set.params, state)?;
    let grid = oracle_grid(&a.grid, set.params.b(), entry.epsilon)?;
    let extrapolate = !a.grid.no_extrapolate;
    let run = |mode| state_energy(&set.params, state, mode, &grid, extrapolate);
    let (exact, approx) = match a.mode {
        ModeArg::Exact => (Some(run(CentrifugalMode::Exact)?), None),
        ModeArg::Approx => (None, Some(run(CentrifugalMode::Approximated)?)),
        ModeArg::Both => {
            let (e, p) = rayon::join(|| run(CentrifugalMode::Exact), || run(CentrifugalMode::Approximated));
            (Some(e?), Some(p?))
        }
    };
    let rel = |e: f64| ((entry.energy - e) / e).abs();
    let mut cells = state_cells(state);
    cells.push(Cell::Num(set.inv_b));
    cells.push(Cell::Num(entry.energy));
    cells.push(Cell::opt(exact.as_ref().map(|r| r.energy)));
    cells.push(Cell::opt(approx.as_ref().map(|r| r.energy)));
    cells.push(Cell::opt_sci(exact.as_ref().map(|r| rel(r.energy))));
    cells.push(Cell::opt_sci(approx.as_ref().map(|r| rel(r.energy))));
    let nodes = approx.as_ref().or(exact.as_ref()).map_or(Cell::Missing, |r| Cell::Int(i64::from(r.node_count)));
    cells.push(nodes);
    let warnings = exact.into_iter().chain(approx).flat_map(|r| r.warnings).collect();
    Ok(OracleRow { cells, warnings })
}

fn cmd_oracle(a: &OracleArgs) -> CliResult<Report> {
    let selection = resolve_states(&a.states, Some("0"))?;
    let sets = resolve_params(&a.physics)?;
    let mut jobs = Vec::new();
    for set in &sets {
        for state in states_for(&selection, &set.params)? {
            jobs.push((*set, state));
        }
    }
    let rows: Vec<CliResult<OracleRow>> = jobs.par_iter().map(|(set, state)| oracle_row(a, set, state)).collect();
    let mut section = Section::new(&[
        "state",
        "n",
        "l",
        "D",
        "inv_b",
        "e_closed",
        "e_exact",
        "e_approx",
        "rel_err_exact",
        "rel_err_approx",
        "nodes",
    ]);
    for row in rows {
        let row = row?;
        for w in &row.warnings {
            eprintln!("warning: {w}");
        }
        section.push(row.cells);
    }
    Ok(Report::single(section))
}

fn cmd_degeneracy(a: &DegeneracyArgs) -> CliResult<Report> {
    let state = QuantumState::new(a.n, a.l, a.dim)?;
    let d_max = a.dmax.unwrap_or(a.dim + 2 * a.l);
    let partners = degenerate_partners(&state, a.dmin, d_max)?;
    let sets = if any_physics(&a.physics) { resolve_params(&a.physics)? } else { Vec::new() };
    let mut section = Section::new(&["state", "n", "l", "D", "inv_b", "energy", "status"]);
    let mut energies = BTreeMap::new();
    for partner in &partners {
        if sets.is_empty() {
            let mut row = state_cells(partner);
            row.extend([Cell::Missing, Cell::Missing, Cell::Missing]);
            section.push(row);
        }
        for set in &sets {
            let mut row = state_cells(partner);
            row.push(Cell::Num(set.inv_b));
            match energy(&set.params, partner) {
                Ok(e) => {
                    energies.entry(set.inv_b.to_bits()).or_insert_with(Vec::new).push(e.energy);
                    row.push(Cell::Num(e.energy));
                    row.push(Cell::Text("bound".into()));
                }
                Err(Error::Unbound { .. }) => row.extend([Cell::Missing, Cell::Text("unbound".into())]),
                Err(Error::ShapeParameter { .. }) => row.extend([Cell::Missing, Cell::Text("undefined".into())]),
                Err(e) => return Err(e.into()),
            }
            section.push(row);
        }
    }
    let mut report = Report::single(section);
    report.footer.push(("partners".into(), Cell::Int(partners.len() as i64)));
    if !energies.is_empty() {
        let spread = energies
            .values()
            .map(|es| {
                let lo = es.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = es.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                hi - lo
            })
            .fold(0.0, f64::max);
        report.footer.push(("max_energy_spread".into(), Cell::Sci(spread)));
    }
    Ok(report)
}

fn cmd_critical(a: &CriticalArgs) -> CliResult<Report> {
    let Selection::Explicit(states) = resolve_states(&a.states, Some("0"))? else {
        unreachable!("a default n always yields an explicit selection")
    };
    let mut section = Section::new(&["state", "n", "l", "D", "alpha", "A_c"]);
    for state in states {
        let mut row = state_cells(&state);
        row.push(Cell::Num(a.alpha));
        row.push(Cell::Num(critical_coupling(&state, a.alpha)?));
        section.push(row);
    }
    Ok(Report::single(section))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_lists_and_ranges() {
        assert_eq!(parse_numbers("n", "3").unwrap(), vec![3]);
        assert_eq!(parse_numbers("n", "0..3").unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(parse_numbers("n", "1..=2").unwrap(), vec![1, 2]);
        assert_eq!(parse_numbers("n", "1, 4,6").unwrap(), vec![1, 4, 6]);
        assert!(parse_numbers("n", "3..1").is_err());
        assert!(parse_numbers("n", "x").is_err());
        assert!(parse_numbers("n", "-1").is_err());
    }
}
