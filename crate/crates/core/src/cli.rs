//! Text formats and summaries shared by the `lpquts` binary.

use std::fmt::Write as _;
use std::path::Path;

use crate::engine::{EngineConfig, SolveReport};
use crate::error::{Error, Result};
use crate::io::content_lines;
use crate::separation::OddCycle;

/// Applies a flat `key=value` config file on top of `config`.
pub fn apply_config_text(config: &mut EngineConfig, text: &str, origin: impl AsRef<Path>) -> Result<()> {
    let origin = origin.as_ref();
    for (line, content) in content_lines(text) {
        let err = |message: String| Error::Parse {
            path: origin.to_path_buf(),
            line,
            message,
        };
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| err(format!("expected key=value, got {content:?}")))?;
        config.set(key.trim(), value.trim()).map_err(|e| match e {
            Error::InvalidParameter(m) => err(m),
            other => err(other.to_string()),
        })?;
    }
    Ok(())
}

/// Parses `<vertex_id> <value>` lines into a dense vector of length `n`.
/// Unlisted vertices get 0; values must lie in `[0, 1]`.
pub fn parse_vertex_values(text: &str, n: usize, origin: impl AsRef<Path>) -> Result<Vec<f64>> {
    let origin = origin.as_ref();
    let mut out = vec![0.0; n];
    let mut seen = vec![false; n];
    for (line, content) in content_lines(text) {
        let err = |message: String| Error::Parse {
            path: origin.to_path_buf(),
            line,
            message,
        };
        let mut it = content.split_whitespace();
        let (Some(id), Some(value), None) = (it.next(), it.next(), it.next()) else {
            return Err(err(format!("expected \"<vertex_id> <value>\", got {content:?}")));
        };
        let id: usize = id.parse().map_err(|_| err(format!("bad vertex id {id:?}")))?;
        let value: f64 = value.parse().map_err(|_| err(format!("bad value {value:?}")))?;
        if id >= n {
            return Err(err(format!("vertex id {id} out of range 0..{n}")));
        }
        if seen[id] {
            return Err(err(format!("vertex {id} listed twice")));
        }
        if !(0.0..=1.0).contains(&value) {
            return Err(err(format!("value {value} outside [0, 1]")));
        }
        seen[id] = true;
        out[id] = value;
    }
    Ok(out)
}

/// One line per cycle, or a fixed message when there are none.
pub fn format_cycles(cycles: &[OddCycle], alpha: f64) -> String {
    if cycles.is_empty() {
        return "no violated odd cycles\n".into();
    }
    let mut out = String::new();
    for c in cycles {
        let verts: Vec<String> = c.vertices().iter().map(usize::to_string).collect();
        let _ = writeln!(
            out,
            "cycle [{}] len {} eps_rlp {:.6} eps_s {:.6} eps_alpha {:.6}",
            verts.join(" "),
            c.len(),
            c.eps_rlp,
            c.eps_s,
            c.eps_alpha(alpha)
        );
    }
    out
}

fn num(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

/// Human-readable trace of a solve.
pub fn solve_summary(report: &SolveReport) -> String {
    let mut out = String::new();
    for r in &report.iterations {
        let _ = writeln!(
            out,
            "iter {:>3}  upper {:<12} lower {:<12} cuts +{:<4} clusters {:<4} edge ratio {:.3}",
            r.index,
            num(r.upper_bound),
            num(r.lower_bound),
            r.cuts_added,
            r.cluster_sizes.len(),
            r.reduced_edge_ratio
        );
    }
    let first = report.iterations.first().map_or(f64::INFINITY, |r| r.upper_bound);
    let members: Vec<String> = report.best_set.members().iter().map(usize::to_string).collect();
    let _ = writeln!(
        out,
        "upper {} -> {}, best {} ({}, {} iterations, {} cuts, sampler {})",
        num(first),
        num(report.upper_bound()),
        num(report.lower_bound()),
        report.termination.name(),
        report.iterations.len(),
        report.cuts.len(),
        report.sampler
    );
    let _ = writeln!(out, "best set: {}", members.join(" "));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::separation::{find_violated_cycles, SeparationInput};
    use crate::WeightedGraph;

    #[test]
    fn config_text() {
        let mut c = EngineConfig::default();
        apply_config_text(&mut c, "# x\nshots = 7\nsampler=greedy\n", "c.cfg").unwrap();
        assert_eq!(c.shots, 7);
        let e = apply_config_text(&mut c, "shots=1\nwhat=3\n", "c.cfg").unwrap_err();
        assert!(e.to_string().starts_with("c.cfg:2:"), "{e}");
    }

    #[test]
    fn vertex_values() {
        let v = parse_vertex_values("0 0.5\n2 1\n", 3, "x").unwrap();
        assert_eq!(v, vec![0.5, 0.0, 1.0]);
        for (text, line) in [("0 0.5\n1 x\n", 2), ("0 0.5\n\n0 0.1\n", 3), ("7 0.1\n", 1), ("0 2\n", 1), ("0\n", 1)] {
            match parse_vertex_values(text, 3, "x") {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn cycle_listing() {
        let c5 = WeightedGraph::cycle(5).unwrap();
        let x = [0.5; 5];
        let occ = [0.0; 5];
        let cycles = find_violated_cycles(&SeparationInput::new(&c5, &x, &occ, 0.0)).unwrap();
        let s = format_cycles(&cycles, 0.0);
        assert!(s.starts_with("cycle [0 1 2 3 4] len 5 eps_rlp 0.500000"), "{s}");
        assert_eq!(format_cycles(&[], 0.0), "no violated odd cycles\n");
    }
}
