//! Tracked allocations and the construction memory monitor.
//!
//! Every payload buffer in the library lives in a [`TrackedVec`], which
//! reports capacity changes to a process-global counter. While a
//! [`MemoryMonitor`] session is open each change is also appended to a
//! totally ordered event log, and labelled phases record their own peaks.

use std::sync::atomic::{AtomicBool, AtomicI64, Ordering};
use std::sync::{Mutex, MutexGuard};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

static LIVE_BYTES: AtomicI64 = AtomicI64::new(0);
static RECORDING: AtomicBool = AtomicBool::new(false);
static STATE: Mutex<Option<Recorder>> = Mutex::new(None);
static SESSION: Mutex<()> = Mutex::new(());

/// One change of the tracked allocation total.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemEvent {
    /// Microseconds since the monitor was started.
    pub time_us: u64,
    pub delta: i64,
    /// Tracked bytes alive after this event.
    pub total: u64,
}

/// A labelled span of the monitored run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Phase {
    pub label: String,
    pub begin_us: u64,
    pub end_us: u64,
    /// Largest tracked total observed while the phase was open.
    pub peak: u64,
    /// Nesting depth, 0 for top-level phases.
    pub depth: usize,
}

/// Everything recorded by one monitor session.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct MemoryReport {
    pub events: Vec<MemEvent>,
    pub phases: Vec<Phase>,
    pub peak: u64,
    pub baseline: u64,
    /// Phase nesting violations seen during the session.
    pub errors: Vec<String>,
}

impl MemoryReport {
    pub fn phase(&self, label: &str) -> Option<&Phase> {
        self.phases.iter().find(|p| p.label == label)
    }

    pub fn top_level_labels(&self) -> Vec<&str> {
        self.phases
            .iter()
            .filter(|p| p.depth == 0)
            .map(|p| p.label.as_str())
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

struct OpenPhase {
    label: String,
    begin_us: u64,
    peak: u64,
    slot: usize,
}

struct Recorder {
    start: Instant,
    events: Vec<MemEvent>,
    phases: Vec<Phase>,
    open: Vec<OpenPhase>,
    peak: u64,
    baseline: u64,
    errors: Vec<String>,
}

impl Recorder {
    fn now(&self) -> u64 {
        self.start.elapsed().as_micros() as u64
    }
}

/// Bytes currently held by tracked buffers, process wide.
pub fn live_bytes() -> u64 {
    LIVE_BYTES.load(Ordering::SeqCst).max(0) as u64
}

pub(crate) fn track(delta: i64) {
    if delta == 0 {
        return;
    }
    if !RECORDING.load(Ordering::Acquire) {
        LIVE_BYTES.fetch_add(delta, Ordering::SeqCst);
        return;
    }
    let mut guard = lock_state();
    // Updating the counter under the lock keeps the log totally ordered.
    let total = (LIVE_BYTES.fetch_add(delta, Ordering::SeqCst) + delta).max(0) as u64;
    match guard.as_mut() {
        Some(rec) => {
            let time_us = rec.now();
            rec.events.push(MemEvent { time_us, delta, total });
            rec.peak = rec.peak.max(total);
            for p in rec.open.iter_mut() {
                p.peak = p.peak.max(total);
            }
        }
        None => {}
    }
}

fn lock_state() -> MutexGuard<'static, Option<Recorder>> {
    STATE.lock().unwrap_or_else(|e| e.into_inner())
}

/// Handle to an open monitor session. Only one session exists at a time;
/// [`MemoryMonitor::start`] blocks until any other session is finished.
pub struct MemoryMonitor {
    _session: MutexGuard<'static, ()>,
}

impl MemoryMonitor {
    pub fn start() -> Self {
        let session = SESSION.lock().unwrap_or_else(|e| e.into_inner());
        let mut state = lock_state();
        let baseline = live_bytes();
        *state = Some(Recorder {
            start: Instant::now(),
            events: Vec::new(),
            phases: Vec::new(),
            open: Vec::new(),
            peak: baseline,
            baseline,
            errors: Vec::new(),
        });
        RECORDING.store(true, Ordering::Release);
        MemoryMonitor { _session: session }
    }

    pub fn begin_phase(&self, label: &str) {
        begin_phase(label);
    }

    pub fn end_phase(&self, label: &str) -> Result<()> {
        end_phase(label)
    }

    /// Opens a phase that closes when the returned guard is dropped.
    pub fn phase(&self, label: &str) -> PhaseGuard {
        begin_phase(label);
        PhaseGuard { label: label.to_string() }
    }

    /// Ends the session. Phases still open are closed and reported as errors.
    pub fn finish(self) -> MemoryReport {
        RECORDING.store(false, Ordering::Release);
        let mut state = lock_state();
        let mut rec = state.take().expect("monitor session is active");
        let now = rec.now();
        while let Some(open) = rec.open.pop() {
            rec.errors.push(format!("phase '{}' never ended", open.label));
            close(&mut rec, open, now);
        }
        MemoryReport {
            events: rec.events,
            phases: rec.phases,
            peak: rec.peak,
            baseline: rec.baseline,
            errors: rec.errors,
        }
    }
}

impl Drop for MemoryMonitor {
    fn drop(&mut self) {
        // finish() already took the recorder; this covers early returns.
        RECORDING.store(false, Ordering::Release);
        lock_state().take();
    }
}

fn close(rec: &mut Recorder, open: OpenPhase, end_us: u64) {
    let phase = &mut rec.phases[open.slot];
    phase.end_us = end_us;
    phase.peak = open.peak;
    if let Some(parent) = rec.open.last_mut() {
        parent.peak = parent.peak.max(open.peak);
    }
}

/// Opens a phase on the active session; a no-op when none is recording.
pub fn begin_phase(label: &str) {
    let mut state = lock_state();
    if let Some(rec) = state.as_mut() {
        let now = rec.now();
        let total = live_bytes();
        let slot = rec.phases.len();
        rec.phases.push(Phase {
            label: label.to_string(),
            begin_us: now,
            end_us: now,
            peak: total,
            depth: rec.open.len(),
        });
        rec.open.push(OpenPhase { label: label.to_string(), begin_us: now, peak: total, slot });
    }
}

/// Closes the innermost phase, which must carry `label`.
pub fn end_phase(label: &str) -> Result<()> {
    let mut state = lock_state();
    let Some(rec) = state.as_mut() else {
        return Ok(());
    };
    match rec.open.last() {
        Some(top) if top.label == label => {
            let open = rec.open.pop().expect("checked above");
            let now = rec.now().max(open.begin_us);
            close(rec, open, now);
            Ok(())
        }
        Some(top) => {
            let msg = format!("end of '{}' while '{}' is innermost", label, top.label);
            rec.errors.push(msg.clone());
            Err(Error::Monitor(msg))
        }
        None => {
            let msg = format!("end of '{label}' without a matching begin");
            rec.errors.push(msg.clone());
            Err(Error::Monitor(msg))
        }
    }
}

/// Ends its phase on drop.
pub struct PhaseGuard {
    label: String,
}

impl Drop for PhaseGuard {
    fn drop(&mut self) {
        let _ = end_phase(&self.label);
    }
}

/// Runs `f` inside a phase of the active session (if any).
pub fn in_phase<T>(label: &str, f: impl FnOnce() -> T) -> T {
    begin_phase(label);
    let out = f();
    let _ = end_phase(label);
    out
}

/// A `Vec` whose heap capacity is reported to the tracker.
#[derive(Debug)]
pub struct TrackedVec<T: Copy> {
    inner: Vec<T>,
}

impl<T: Copy> TrackedVec<T> {
    pub fn new() -> Self {
        TrackedVec { inner: Vec::new() }
    }

    pub fn from_vec(inner: Vec<T>) -> Self {
        track(Self::bytes_of(inner.capacity()));
        TrackedVec { inner }
    }

    pub fn with_capacity(cap: usize) -> Self {
        Self::from_vec(Vec::with_capacity(cap))
    }

    pub fn filled(value: T, len: usize) -> Self {
        Self::from_vec(vec![value; len])
    }

    fn bytes_of(cap: usize) -> i64 {
        (cap * std::mem::size_of::<T>()) as i64
    }

    /// Applies a mutation that may reallocate, reporting the capacity change.
    fn resize_with<R>(&mut self, f: impl FnOnce(&mut Vec<T>) -> R) -> R {
        let before = self.inner.capacity();
        let out = f(&mut self.inner);
        let after = self.inner.capacity();
        if before != after {
            track(Self::bytes_of(after) - Self::bytes_of(before));
        }
        out
    }

    pub fn push(&mut self, value: T) {
        if self.inner.len() < self.inner.capacity() {
            self.inner.push(value);
        } else {
            self.resize_with(|v| v.push(value));
        }
    }

    pub fn pop(&mut self) -> Option<T> {
        self.inner.pop()
    }

    pub fn resize(&mut self, len: usize, value: T) {
        self.resize_with(|v| v.resize(len, value));
    }

    pub fn truncate(&mut self, len: usize) {
        self.inner.truncate(len);
    }

    pub fn shrink_to_fit(&mut self) {
        self.resize_with(|v| v.shrink_to_fit());
    }

    pub fn heap_bytes(&self) -> usize {
        self.inner.capacity() * std::mem::size_of::<T>()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.inner
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.inner
    }
}

impl<T: Copy> Default for TrackedVec<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Copy> Clone for TrackedVec<T> {
    fn clone(&self) -> Self {
        Self::from_vec(self.inner.clone())
    }
}

impl<T: Copy + PartialEq> PartialEq for TrackedVec<T> {
    fn eq(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
}

impl<T: Copy + Eq> Eq for TrackedVec<T> {}

impl<T: Copy> Drop for TrackedVec<T> {
    fn drop(&mut self) {
        track(-Self::bytes_of(self.inner.capacity()));
    }
}

impl<T: Copy> std::ops::Deref for TrackedVec<T> {
    type Target = [T];
    fn deref(&self) -> &[T] {
        &self.inner
    }
}

impl<T: Copy> std::ops::DerefMut for TrackedVec<T> {
    fn deref_mut(&mut self) -> &mut [T] {
        &mut self.inner
    }
}
