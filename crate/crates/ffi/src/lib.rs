//! C ABI over `lpquts-core`.
//!
//! Graphs and reports are opaque heap handles released with their `_free`
//! function. Every fallible call returns an [`LqStatus`]; on failure
//! [`lq_last_error`] describes the problem for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::time::Duration;

use lpquts_core::engine::{
    exact_mwis_with, lp_quts, optimality_gap, stt, EngineConfig, ExactOptions, SolveReport, Termination, EXACT_GUARD,
};
use lpquts_core::generate::{gen_erdos_renyi, gen_series_parallel};
use lpquts_core::io::{read_graph, write_graph};
use lpquts_core::samplers::SamplerKind;
use lpquts_core::{Error, WeightedGraph};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidGraph = 3,
    Parse = 4,
    Io = 5,
    TooLarge = 6,
    TimeBudget = 7,
    Solver = 8,
    BufferTooSmall = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LqTermination {
    Converged = 0,
    Patience = 1,
    MaxIterations = 2,
    NoViolatedCuts = 3,
}

pub const LQ_SAMPLER_GREEDY: u32 = 0;
pub const LQ_SAMPLER_SA: u32 = 1;
pub const LQ_SAMPLER_RYDBERG: u32 = 2;

/// Engine settings. Start from [`lq_solve_config_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct LqSolveConfig {
    pub max_iterations: u32,
    pub patience: u32,
    pub shots: u32,
    pub alpha_steps: u32,
    /// One of the `LQ_SAMPLER_*` constants.
    pub sampler: u32,
    /// 0 selects `min(N, 40)`.
    pub max_subgraph: u32,
    pub seed: u64,
    pub tol_lp: f64,
    pub tol_dual: f64,
    /// false runs the separation at alpha = 0 only.
    pub sample_informed: bool,
}

/// Opaque graph handle.
pub struct LqGraph {
    inner: WeightedGraph,
}

/// Opaque solve report handle.
pub struct LqReport {
    inner: SolveReport,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

fn status_of(e: &Error) -> LqStatus {
    match e {
        Error::InvalidGraph(_) | Error::CutOutOfRange { .. } => LqStatus::InvalidGraph,
        Error::Parse { .. } => LqStatus::Parse,
        Error::Io { .. } => LqStatus::Io,
        Error::TooLarge { .. } => LqStatus::TooLarge,
        Error::TimeBudget(_) => LqStatus::TimeBudget,
        Error::IterationLimit(_) | Error::LpInternal(_) | Error::NegativeEdgeCost { .. } => LqStatus::Solver,
        _ => LqStatus::InvalidArgument,
    }
}

/// Runs `f`, recording errors and converting panics.
fn guard(f: impl FnOnce() -> Result<(), (LqStatus, String)>) -> LqStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            LqStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            LqStatus::Panic
        }
    }
}

fn lift(e: Error) -> (LqStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (LqStatus, String) {
    (LqStatus::NullPointer, format!("{what} is null"))
}

unsafe fn path_arg(p: *const c_char) -> Result<String, (LqStatus, String)> {
    if p.is_null() {
        return Err(null("path"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map(str::to_owned)
        .map_err(|_| (LqStatus::InvalidArgument, "path is not valid UTF-8".into()))
}

unsafe fn put_graph(out: *mut *mut LqGraph, g: WeightedGraph) {
    *out = Box::into_raw(Box::new(LqGraph { inner: g }));
}

/// Message for the last failed call on this thread ("" after a success).
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn lq_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds a graph from `n` weights and `m` edges given as `2*m` vertex ids.
///
/// # Safety
/// `weights` must point to `n` doubles, `edges` to `2*m` integers (may be
/// null when `m == 0`), and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lq_graph_new(
    n: usize,
    weights: *const f64,
    m: usize,
    edges: *const u32,
    out: *mut *mut LqGraph,
) -> LqStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if weights.is_null() && n > 0 {
            return Err(null("weights"));
        }
        if edges.is_null() && m > 0 {
            return Err(null("edges"));
        }
        let w = if n == 0 {
            Vec::new()
        } else {
            std::slice::from_raw_parts(weights, n).to_vec()
        };
        let e = if m == 0 { &[][..] } else { std::slice::from_raw_parts(edges, 2 * m) };
        let pairs = e.chunks_exact(2).map(|c| (c[0] as usize, c[1] as usize));
        let g = WeightedGraph::new(w, pairs).map_err(lift)?;
        put_graph(out, g);
        Ok(())
    })
}

/// # Safety
/// `path` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lq_graph_read(path: *const c_char, out: *mut *mut LqGraph) -> LqStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let g = read_graph(path_arg(path)?).map_err(lift)?;
        put_graph(out, g);
        Ok(())
    })
}

/// # Safety
/// `graph` must come from this library; `path` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn lq_graph_write(graph: *const LqGraph, path: *const c_char) -> LqStatus {
    guard(|| {
        let g = graph.as_ref().ok_or_else(|| null("graph"))?;
        write_graph(&g.inner, path_arg(path)?).map_err(lift)
    })
}

/// Connected Erdős-Rényi graph.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lq_graph_gen_er(
    n: usize,
    p: f64,
    weighted: bool,
    seed: u64,
    out: *mut *mut LqGraph,
) -> LqStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        put_graph(out, gen_erdos_renyi(n, p, weighted, seed).map_err(lift)?);
        Ok(())
    })
}

/// Series-parallel graph with `n` vertices and unit weights.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lq_graph_gen_sp(n: usize, seed: u64, out: *mut *mut LqGraph) -> LqStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        put_graph(out, gen_series_parallel(n, seed).map_err(lift)?);
        Ok(())
    })
}

/// # Safety
/// `graph` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn lq_graph_n(graph: *const LqGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.inner.n())
}

/// # Safety
/// `graph` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn lq_graph_m(graph: *const LqGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.inner.m())
}

/// # Safety
/// `graph` must be null or come from this library, and not be used again.
#[no_mangle]
pub unsafe extern "C" fn lq_graph_free(graph: *mut LqGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Exact MWIS. `members` (capacity `cap`) receives the vertex ids; `count`
/// always receives the set size. `max_n = 0` uses the default guard;
/// `time_budget_s <= 0` means no limit.
///
/// # Safety
/// Pointers must be valid; `members` may be null when `cap == 0`.
#[no_mangle]
pub unsafe extern "C" fn lq_exact(
    graph: *const LqGraph,
    max_n: usize,
    time_budget_s: f64,
    value: *mut f64,
    members: *mut u32,
    cap: usize,
    count: *mut usize,
) -> LqStatus {
    guard(|| {
        let g = graph.as_ref().ok_or_else(|| null("graph"))?;
        if value.is_null() || count.is_null() {
            return Err(null("value/count"));
        }
        let opts = ExactOptions {
            max_n: if max_n == 0 { EXACT_GUARD } else { max_n },
            time_budget: (time_budget_s > 0.0).then(|| Duration::from_secs_f64(time_budget_s)),
        };
        let s = exact_mwis_with(&g.inner, &opts).map_err(lift)?;
        *value = s.value;
        copy_members(s.set.members(), members, cap, count)
    })
}

unsafe fn copy_members(
    src: &[usize],
    dst: *mut u32,
    cap: usize,
    count: *mut usize,
) -> Result<(), (LqStatus, String)> {
    *count = src.len();
    if src.len() > cap {
        return Err((
            LqStatus::BufferTooSmall,
            format!("need room for {} vertices, got {cap}", src.len()),
        ));
    }
    if !src.is_empty() {
        if dst.is_null() {
            return Err(null("members"));
        }
        for (i, &v) in src.iter().enumerate() {
            *dst.add(i) = v as u32;
        }
    }
    Ok(())
}

#[no_mangle]
pub extern "C" fn lq_solve_config_default() -> LqSolveConfig {
    let c = EngineConfig::default();
    LqSolveConfig {
        max_iterations: c.max_iterations as u32,
        patience: c.patience as u32,
        shots: c.shots as u32,
        alpha_steps: c.alpha_steps as u32,
        sampler: LQ_SAMPLER_SA,
        max_subgraph: 0,
        seed: c.seed,
        tol_lp: c.tol_lp,
        tol_dual: c.tol_dual,
        sample_informed: c.sample_informed,
    }
}

fn engine_config(c: &LqSolveConfig) -> Result<EngineConfig, (LqStatus, String)> {
    let sampler = match c.sampler {
        LQ_SAMPLER_GREEDY => SamplerKind::Greedy,
        LQ_SAMPLER_SA => SamplerKind::Sa,
        LQ_SAMPLER_RYDBERG => SamplerKind::Rydberg,
        other => return Err((LqStatus::InvalidArgument, format!("unknown sampler code {other}"))),
    };
    Ok(EngineConfig {
        max_iterations: c.max_iterations as usize,
        patience: c.patience as usize,
        shots: c.shots as usize,
        alpha_steps: c.alpha_steps as usize,
        sampler,
        max_subgraph: (c.max_subgraph > 0).then_some(c.max_subgraph as usize),
        seed: c.seed,
        tol_lp: c.tol_lp,
        tol_dual: c.tol_dual,
        sample_informed: c.sample_informed,
        ..EngineConfig::default()
    })
}

/// Runs the cutting-plane loop. `config` may be null for defaults.
///
/// # Safety
/// `graph` must come from this library and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn lq_solve(
    graph: *const LqGraph,
    config: *const LqSolveConfig,
    out: *mut *mut LqReport,
) -> LqStatus {
    guard(|| {
        let g = graph.as_ref().ok_or_else(|| null("graph"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let cfg = match config.as_ref() {
            Some(c) => engine_config(c)?,
            None => EngineConfig::default(),
        };
        let report = lp_quts(&g.inner, &cfg).map_err(lift)?;
        *out = Box::into_raw(Box::new(LqReport { inner: report }));
        Ok(())
    })
}

/// Final upper bound (NaN for a null report).
///
/// # Safety
/// `report` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn lq_report_upper(report: *const LqReport) -> f64 {
    report.as_ref().map_or(f64::NAN, |r| r.inner.upper_bound())
}

/// Best independent-set weight (NaN for a null report).
///
/// # Safety
/// `report` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn lq_report_lower(report: *const LqReport) -> f64 {
    report.as_ref().map_or(f64::NAN, |r| r.inner.lower_bound())
}

/// # Safety
/// `report` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn lq_report_iterations(report: *const LqReport) -> usize {
    report.as_ref().map_or(0, |r| r.inner.iterations.len())
}

/// # Safety
/// `report` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn lq_report_converged(report: *const LqReport) -> bool {
    report.as_ref().is_some_and(|r| r.inner.converged)
}

/// # Safety
/// `report` must come from this library.
#[no_mangle]
pub unsafe extern "C" fn lq_report_termination(report: *const LqReport, out: *mut LqTermination) -> LqStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = match r.inner.termination {
            Termination::Converged => LqTermination::Converged,
            Termination::Patience => LqTermination::Patience,
            Termination::MaxIterations => LqTermination::MaxIterations,
            Termination::NoViolatedCuts => LqTermination::NoViolatedCuts,
        };
        Ok(())
    })
}

/// Bounds recorded at 0-based iteration `index`.
///
/// # Safety
/// `report` must come from this library; `upper` and `lower` writable.
#[no_mangle]
pub unsafe extern "C" fn lq_report_iteration_bounds(
    report: *const LqReport,
    index: usize,
    upper: *mut f64,
    lower: *mut f64,
) -> LqStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        if upper.is_null() || lower.is_null() {
            return Err(null("upper/lower"));
        }
        let rec = r.inner.iterations.get(index).ok_or_else(|| {
            (
                LqStatus::InvalidArgument,
                format!("iteration {index} out of range 0..{}", r.inner.iterations.len()),
            )
        })?;
        *upper = rec.upper_bound;
        *lower = rec.lower_bound;
        Ok(())
    })
}

/// Copies the best set's vertex ids; see [`lq_exact`] for the buffer rules.
///
/// # Safety
/// `report` must come from this library; `count` writable; `members` valid
/// for `cap` writes.
#[no_mangle]
pub unsafe extern "C" fn lq_report_best_set(
    report: *const LqReport,
    members: *mut u32,
    cap: usize,
    count: *mut usize,
) -> LqStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        if count.is_null() {
            return Err(null("count"));
        }
        copy_members(r.inner.best_set.members(), members, cap, count)
    })
}

/// Full report as JSON; release with [`lq_string_free`]. Null on failure.
///
/// # Safety
/// `report` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn lq_report_json(report: *const LqReport) -> *mut c_char {
    let mut result = ptr::null_mut();
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        let json = serde_json::to_string(&r.inner).map_err(|e| (LqStatus::Solver, e.to_string()))?;
        result = CString::new(json)
            .map_err(|e| (LqStatus::Solver, e.to_string()))?
            .into_raw();
        Ok(())
    });
    result
}

/// # Safety
/// `s` must be null or come from [`lq_report_json`], and not be used again.
#[no_mangle]
pub unsafe extern "C" fn lq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `report` must be null or come from this library, and not be used again.
#[no_mangle]
pub unsafe extern "C" fn lq_report_free(report: *mut LqReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Sample-to-target for `len` sample costs. Writes NaN when no sample reaches
/// the target.
///
/// # Safety
/// `costs` must point to `len` doubles and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn lq_stt(costs: *const f64, len: usize, c_opt: f64, epsilon: f64, out: *mut f64) -> LqStatus {
    guard(|| {
        if out.is_null() || (costs.is_null() && len > 0) {
            return Err(null("costs/out"));
        }
        if !(c_opt > 0.0) || !(0.0..1.0).contains(&epsilon) {
            return Err((
                LqStatus::InvalidArgument,
                format!("need c_opt > 0 and 0 <= epsilon < 1, got {c_opt} and {epsilon}"),
            ));
        }
        let costs = if len == 0 { &[][..] } else { std::slice::from_raw_parts(costs, len) };
        *out = stt(costs, c_opt, epsilon).unwrap_or(f64::NAN);
        Ok(())
    })
}

/// `1 - best/c_opt` clamped to `[0, 1]`; NaN when `c_opt <= 0`.
#[no_mangle]
pub extern "C" fn lq_optimality_gap(best: f64, c_opt: f64) -> f64 {
    optimality_gap(best, c_opt)
}
