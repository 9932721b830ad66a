//! C ABI over `augsched`.
//!
//! Graphs are opaque handles created by `augsched_graph_*` and released with
//! [`augsched_graph_free`]. Every fallible call returns an [`AugStatus`]; on
//! failure [`augsched_last_error`] describes the cause for the calling thread.
//! Link ids are `size_t` indices in insertion order.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use augsched::experiment::{Algorithm, Experiment, ExperimentConfig, GraphSource, DEFAULT_SLOPE_THRESHOLD};
use augsched::grid::build_grid;
use augsched::oracle::{delta_lower_bound, max_weight_matching};
use augsched::protocol::run_control_part;
use augsched::traffic::LoadPreset;
use augsched::{Error, Graph, Matching, QueueVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AugStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidLink = 2,
    InvalidNode = 3,
    InvalidGraph = 4,
    NotAMatching = 5,
    LengthMismatch = 6,
    CapExceeded = 7,
    Domain = 8,
    Config = 9,
    Io = 10,
    Parse = 11,
    BufferTooSmall = 12,
    Panic = 13,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AugAlgorithm {
    Aug = 0,
    Mm = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AugPreset {
    /// Grid only: heavy/light/vertical = 0.7/0.1/0.1.
    Fig5 = 0,
    /// Grid only: 0.89/0.1/0.01.
    Fig6 = 1,
    /// λ/Δ on every link.
    Uniform = 2,
}

/// Opaque network handle.
pub struct AugGraph {
    inner: Graph,
    grid: Option<(usize, usize)>,
}

/// One simulation run. Zero-initialise and fill the fields you need;
/// `warmup == 0` means one fifth of `horizon`, `slope_threshold <= 0` means
/// the library default.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct AugSimConfig {
    pub algorithm: AugAlgorithm,
    pub k: usize,
    pub p: f64,
    pub preset: AugPreset,
    pub lambda: f64,
    pub horizon: u64,
    pub warmup: u64,
    pub seed: u64,
    pub slope_threshold: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct AugSimResult {
    pub avg_total_backlog: f64,
    pub final_total_backlog: u64,
    pub backlog_slope: f64,
    pub stable: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> AugStatus {
    match e {
        Error::InvalidLink { .. } => AugStatus::InvalidLink,
        Error::InvalidNode { .. } => AugStatus::InvalidNode,
        Error::InvalidGraph(_) | Error::InvalidAugmentation(_) => AugStatus::InvalidGraph,
        Error::NotAMatching(..) => AugStatus::NotAMatching,
        Error::LengthMismatch { .. } => AugStatus::LengthMismatch,
        Error::CapExceeded { .. } => AugStatus::CapExceeded,
        Error::Domain(_) | Error::NegativeQueue { .. } => AugStatus::Domain,
        Error::Config(_) => AugStatus::Config,
        Error::Io { .. } | Error::Csv { .. } => AugStatus::Io,
        Error::Parse { .. } => AugStatus::Parse,
    }
}

struct Fail(AugStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(AugStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> AugStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AugStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            AugStatus::Panic
        }
    }
}

unsafe fn graph_ref<'a>(g: *const AugGraph) -> Result<&'a AugGraph, Fail> {
    g.as_ref().ok_or_else(|| null("graph"))
}

unsafe fn input<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(p, len))
}

unsafe fn write_links(links: &[usize], out: *mut usize, cap: usize, out_len: *mut usize) -> Result<(), Fail> {
    if out_len.is_null() {
        return Err(null("out_len"));
    }
    *out_len = links.len();
    if links.len() > cap {
        return Err(Fail(
            AugStatus::BufferTooSmall,
            format!("need room for {} links, buffer holds {cap}", links.len()),
        ));
    }
    if !links.is_empty() {
        if out.is_null() {
            return Err(null("out_links"));
        }
        ptr::copy_nonoverlapping(links.as_ptr(), out, links.len());
    }
    Ok(())
}

fn boxed(out: *mut *mut AugGraph, graph: AugGraph) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("out"));
    }
    unsafe { *out = Box::into_raw(Box::new(graph)) };
    Ok(())
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn augsched_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Empty graph with `node_count` nodes.
///
/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn augsched_graph_new(node_count: usize, out: *mut *mut AugGraph) -> AugStatus {
    guard(|| {
        let inner = Graph::new(node_count)?;
        boxed(out, AugGraph { inner, grid: None })
    })
}

/// `rows × cols` grid; node `(r, c)` has id `r·cols + c`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn augsched_graph_grid(rows: usize, cols: usize, out: *mut *mut AugGraph) -> AugStatus {
    guard(|| {
        let grid = build_grid(rows, cols)?;
        boxed(out, AugGraph { inner: grid.graph, grid: Some((rows, cols)) })
    })
}

/// Reads a graph file (`nodes N` then `link u v` lines).
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn augsched_graph_from_file(path: *const c_char, out: *mut *mut AugGraph) -> AugStatus {
    guard(|| {
        if path.is_null() {
            return Err(null("path"));
        }
        let path =
            CStr::from_ptr(path).to_str().map_err(|_| Fail(AugStatus::Parse, "path is not valid UTF-8".into()))?;
        let inner = Graph::from_file(path)?;
        boxed(out, AugGraph { inner, grid: None })
    })
}

/// Releases a graph. NULL is ignored.
///
/// # Safety
/// `g` must come from an `augsched_graph_*` constructor and not be used again.
#[no_mangle]
pub unsafe extern "C" fn augsched_graph_free(g: *mut AugGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Adds link `u`–`v` and writes its id to `out_link` (may be NULL).
///
/// # Safety
/// `g` must be a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn augsched_graph_add_link(
    g: *mut AugGraph,
    u: usize,
    v: usize,
    out_link: *mut usize,
) -> AugStatus {
    guard(|| {
        let g = g.as_mut().ok_or_else(|| null("graph"))?;
        let id = g.inner.add_link(u, v)?;
        g.grid = None;
        if !out_link.is_null() {
            *out_link = id;
        }
        Ok(())
    })
}

/// # Safety
/// `g` must be a live graph handle or NULL (returns 0).
#[no_mangle]
pub unsafe extern "C" fn augsched_graph_node_count(g: *const AugGraph) -> usize {
    g.as_ref().map_or(0, |g| g.inner.node_count())
}

/// # Safety
/// `g` must be a live graph handle or NULL (returns 0).
#[no_mangle]
pub unsafe extern "C" fn augsched_graph_link_count(g: *const AugGraph) -> usize {
    g.as_ref().map_or(0, |g| g.inner.link_count())
}

/// Brute-force maximum-weight matching under queue lengths `q`
/// (`q_len` must equal the link count). Ids go to `out_links` in ascending
/// order; `*out_len` is set even when the buffer is too small.
///
/// # Safety
/// Pointers must be valid for the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn augsched_max_weight_matching(
    g: *const AugGraph,
    q: *const u64,
    q_len: usize,
    out_links: *mut usize,
    out_cap: usize,
    out_len: *mut usize,
    out_weight: *mut u64,
) -> AugStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let q = QueueVector::new(input(q, q_len, "q")?.to_vec());
        let res = max_weight_matching(&g.inner, &q)?;
        if !out_weight.is_null() {
            *out_weight = res.optimal_weight;
        }
        write_links(&res.optimal_matching.to_vec(), out_links, out_cap, out_len)
    })
}

/// Lower bound on the probability that one control part reaches the
/// approximation target.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn augsched_delta_lower_bound(
    p: f64,
    n: usize,
    k: usize,
    max_degree: usize,
    out: *mut f64,
) -> AugStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = delta_lower_bound(p, n, k, max_degree)?;
        Ok(())
    })
}

/// One distributed control part from schedule `prev` (link ids) under
/// queues `q`, seeded by `seed`. Writes the new schedule's link ids.
///
/// # Safety
/// Pointers must be valid for the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn augsched_control_part(
    g: *const AugGraph,
    q: *const u64,
    q_len: usize,
    prev: *const usize,
    prev_len: usize,
    k: usize,
    p: f64,
    seed: u64,
    out_links: *mut usize,
    out_cap: usize,
    out_len: *mut usize,
) -> AugStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let q = QueueVector::new(input(q, q_len, "q")?.to_vec());
        let prev = Matching::from_links(&g.inner, input(prev, prev_len, "prev")?)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let out = run_control_part(&g.inner, &q, &prev, k, p, &mut rng)?;
        write_links(&out.new_matching.to_vec(), out_links, out_cap, out_len)
    })
}

/// Simulates one run on `g` and fills `out`. Grid presets need a graph made
/// by [`augsched_graph_grid`] that has not been modified since.
///
/// # Safety
/// `g`, `config` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn augsched_run_simulation(
    g: *const AugGraph,
    config: *const AugSimConfig,
    out: *mut AugSimResult,
) -> AugStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let c = config.as_ref().ok_or_else(|| null("config"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let cfg = ExperimentConfig {
            graph: match g.grid {
                Some((rows, cols)) => GraphSource::Grid { rows, cols },
                None => GraphSource::File(Default::default()),
            },
            algorithm: match c.algorithm {
                AugAlgorithm::Aug => Algorithm::Aug,
                AugAlgorithm::Mm => Algorithm::Mm,
            },
            k: c.k,
            p: c.p,
            preset: match c.preset {
                AugPreset::Fig5 => LoadPreset::Fig5,
                AugPreset::Fig6 => LoadPreset::Fig6,
                AugPreset::Uniform => LoadPreset::Uniform,
            },
            lambdas: vec![c.lambda],
            horizon: c.horizon,
            warmup: if c.warmup == 0 { c.horizon / 5 } else { c.warmup },
            seeds: vec![c.seed],
            slope_threshold: if c.slope_threshold > 0.0 { c.slope_threshold } else { DEFAULT_SLOPE_THRESHOLD },
            ..Default::default()
        };
        let exp = match g.grid {
            Some(_) => Experiment::new(cfg)?,
            None => Experiment::with_graph(cfg, g.inner.clone())?,
        };
        let run = exp.run_point(c.lambda, c.seed, false)?;
        *out = AugSimResult {
            avg_total_backlog: run.row.avg_total_backlog,
            final_total_backlog: run.row.final_total_backlog,
            backlog_slope: run.row.backlog_slope,
            stable: run.row.stable,
        };
        Ok(())
    })
}
