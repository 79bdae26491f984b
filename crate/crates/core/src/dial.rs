//! Cycle-accurate model of the dial-based GRANDAB architecture (AB ≤ 3).
//!
//! Two dials hold the column syndromes `s₁..sₙ`, each paired with an index
//! dial. Every time step the datapath XORs the received syndrome with one
//! row of each dial (and, for three flips, the controller's syndrome) in
//! `n` parallel lanes, NOR-reduces each lane, and a priority encoder picks
//! the lowest lane whose syndrome is zero.
//!
//! Schedule:
//!
//! | phase   | cycles                    | lane `m` checks                     |
//! |---------|---------------------------|-------------------------------------|
//! | weight0 | 1                         | `H·rᵀ`                              |
//! | weight1 | 1                         | `H·rᵀ ⊕ dial1[m]`                   |
//! | weight2 | `⌊n/2⌋`                   | `H·rᵀ ⊕ dial1[m] ⊕ dial2[m]`        |
//! | weight3 | `Σ_{c=1}^{n-2} ⌊(n−c)/2⌋` | `H·rᵀ ⊕ s_c ⊕ dial1[m] ⊕ dial2[m]`  |
//!
//! In the weight-2 phase dial 2 is dial 1 rotated by 1, 2, …, `⌊n/2⌋`. In
//! the weight-3 phase the controller holds `s_c`; both dials are shifted up
//! so only `s_{c+1}..sₙ` remain and dial 2 rotates within those rows. Dial 1
//! stays fixed inside a sub-phase.

use std::fmt;

use crate::code::LinearCode;
use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::grand::{DecodeResult, GrandConfig};
use crate::syndrome::Syndrome;

/// Time steps needed to exhaust every pattern of weight at most `ab`.
pub fn worst_case_cycles(n: usize, ab: usize) -> Result<u64> {
    let n = n as u64;
    match ab {
        1 => Ok(2),
        2 => Ok(2 + n / 2),
        3 => Ok(2 + (2..=n).map(|i| i / 2).sum::<u64>()),
        other => Err(Error::UnsupportedWeight(other)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Weight0,
    Weight1,
    Weight2,
    Weight3,
    Done,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::Weight0 => "weight0",
            Phase::Weight1 => "weight1",
            Phase::Weight2 => "weight2",
            Phase::Weight3 => "weight3",
            Phase::Done => "done",
        })
    }
}

/// A syndrome dial together with its index dial.
///
/// Only the non-null rows are stored, in logical order, plus the rotation
/// `head`: physical row `m < active` holds `entries[(head + m) % active]`
/// and rows `active..n` are null. Cyclic shifts are O(1).
#[derive(Debug, Clone)]
pub struct Dial<S> {
    slots: usize,
    entries: Vec<(usize, S)>,
    head: usize,
}

impl<S: Syndrome> Dial<S> {
    fn loaded(cols: &[S]) -> Self {
        let mut dial = Dial {
            slots: cols.len(),
            entries: Vec::with_capacity(cols.len()),
            head: 0,
        };
        dial.reset(cols);
        dial
    }

    /// Reloads `s₁..sₙ` top to bottom.
    fn reset(&mut self, cols: &[S]) {
        self.entries.clear();
        self.entries
            .extend(cols.iter().enumerate().map(|(i, s)| (i + 1, s.clone())));
        self.head = 0;
    }

    /// Cyclic shift among the non-null rows: row `m+1` moves to row `m`,
    /// row 0 wraps to the last non-null row.
    fn shift(&mut self) {
        if !self.entries.is_empty() {
            self.head = (self.head + 1) % self.entries.len();
        }
    }

    /// Cyclic shift whose wrapped-around row is replaced by the null vector.
    fn shift_up(&mut self) {
        if self.entries.is_empty() {
            return;
        }
        self.entries.remove(self.head);
        if self.head == self.entries.len() {
            self.head = 0;
        }
    }

    /// Number of non-null rows.
    pub fn active(&self) -> usize {
        self.entries.len()
    }

    /// Physical row count `n`.
    pub fn slots(&self) -> usize {
        self.slots
    }

    /// Index-dial content of row `m`; `None` for a null row.
    pub fn index_at(&self, m: usize) -> Option<usize> {
        self.entry_at(m).map(|(i, _)| *i)
    }

    pub fn syndrome_at(&self, m: usize) -> Option<&S> {
        self.entry_at(m).map(|(_, s)| s)
    }

    fn entry_at(&self, m: usize) -> Option<&(usize, S)> {
        let a = self.entries.len();
        (m < a).then(|| &self.entries[(self.head + m) % a])
    }

    /// Non-null rows in physical order.
    fn rows(&self) -> impl Iterator<Item = &(usize, S)> {
        let (front, back) = self.entries.split_at(self.head);
        back.iter().chain(front)
    }
}

/// Outcome of one time step without the per-lane detail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    pub time_step: u64,
    /// Lanes evaluated this cycle.
    pub checks: usize,
    /// Pattern selected by the priority encoder.
    pub hit: Option<Vec<usize>>,
}

/// One lane of a time step: the flipped positions and the resulting syndrome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub tuple: Vec<usize>,
    pub syndrome: BitVector,
}

/// Full per-lane record of one time step, in physical row order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleReport {
    pub time_step: u64,
    pub phase: Phase,
    /// Controller position in the weight-3 phase.
    pub controller: Option<usize>,
    /// Rotation of dial 2 relative to its sub-phase start; 0 outside
    /// weight 2 and weight 3.
    pub offset: usize,
    pub checks: Vec<Check>,
    pub hit: Option<Vec<usize>>,
}

impl fmt::Display for CycleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cycle={} phase={} controller=", self.time_step, self.phase)?;
        match self.controller {
            Some(c) => write!(f, "{c}")?,
            None => f.write_str("-")?,
        }
        write!(f, " offset={} checks={} hit=", self.offset, self.checks.len())?;
        match &self.hit {
            Some(t) => write!(f, "{}", format_tuple(t)),
            None => f.write_str("-"),
        }
    }
}

/// `(i,j,k)` rendering used by traces; the empty pattern is `()`.
pub fn format_tuple(t: &[usize]) -> String {
    let inner: Vec<String> = t.iter().map(usize::to_string).collect();
    format!("({})", inner.join(","))
}

/// Architecture state between time steps.
#[derive(Debug, Clone)]
pub struct DialState<'a, S> {
    cols: &'a [S],
    width: usize,
    ab: usize,
    phase: Phase,
    time_step: u64,
    controller: usize,
    shift_count: usize,
    dial1: Dial<S>,
    dial2: Dial<S>,
    base: S,
    /// `H·rᵀ ⊕ s_c` while the controller is active.
    controller_base: S,
}

/// Loads the architecture for `r` using the generic syndrome width.
pub fn init<'a>(code: &'a LinearCode, r: &BitVector, cfg: GrandConfig) -> Result<DialState<'a, BitVector>> {
    DialState::new(code, r, cfg)
}

impl<'a, S: Syndrome> DialState<'a, S> {
    pub fn new(code: &'a LinearCode, r: &BitVector, cfg: GrandConfig) -> Result<Self> {
        if r.len() != code.n() {
            return Err(Error::DimensionMismatch {
                expected: code.n(),
                found: r.len(),
            });
        }
        if !(1..=3).contains(&cfg.ab) {
            return Err(Error::UnsupportedWeight(cfg.ab));
        }
        let cols = S::columns(code).ok_or_else(|| {
            Error::Config(format!(
                "syndrome width {} needs the generic representation",
                code.redundancy()
            ))
        })?;
        let base = S::of(code, r);
        Ok(DialState {
            cols,
            width: code.redundancy(),
            ab: cfg.ab,
            phase: Phase::Weight0,
            time_step: 0,
            controller: 0,
            shift_count: 0,
            dial1: Dial::loaded(cols),
            dial2: Dial::loaded(cols),
            controller_base: base.clone(),
            base,
        })
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    /// Cycles consumed so far.
    pub fn time_step(&self) -> u64 {
        self.time_step
    }

    /// Controller position `c` during the weight-3 phase.
    pub fn controller(&self) -> Option<usize> {
        (self.phase == Phase::Weight3).then_some(self.controller)
    }

    /// Completed rotations of dial 2 within the current sub-phase.
    pub fn shift_count(&self) -> usize {
        self.shift_count
    }

    pub fn dial1(&self) -> &Dial<S> {
        &self.dial1
    }

    pub fn dial2(&self) -> &Dial<S> {
        &self.dial2
    }

    pub fn base_syndrome(&self) -> &S {
        &self.base
    }

    pub fn is_done(&self) -> bool {
        self.phase == Phase::Done
    }

    fn offset(&self) -> usize {
        match self.phase {
            Phase::Weight2 | Phase::Weight3 => self.shift_count + 1,
            _ => 0,
        }
    }

    /// Lanes evaluated in the current time step.
    pub fn lanes(&self) -> usize {
        match self.phase {
            Phase::Weight0 => 1,
            Phase::Weight1 | Phase::Weight2 | Phase::Weight3 => self.dial1.active(),
            Phase::Done => 0,
        }
    }

    fn lane_tuple(&self, m: usize) -> Vec<usize> {
        let i = || self.dial1.index_at(m).expect("active lane");
        let j = || self.dial2.index_at(m).expect("active lane");
        let mut t = match self.phase {
            Phase::Weight0 => vec![],
            Phase::Weight1 => vec![i()],
            Phase::Weight2 => vec![i(), j()],
            Phase::Weight3 => vec![self.controller, i(), j()],
            Phase::Done => unreachable!("no lanes when done"),
        };
        t.sort_unstable();
        t
    }

    /// Priority encoder: lowest lane whose syndrome is zero.
    fn first_zero_lane(&self) -> Option<usize> {
        match self.phase {
            Phase::Weight0 => self.base.is_zero().then_some(0),
            Phase::Weight1 => self
                .dial1
                .rows()
                .position(|(_, s)| self.base.xor(s).is_zero()),
            Phase::Weight2 | Phase::Weight3 => {
                let base = if self.phase == Phase::Weight3 {
                    &self.controller_base
                } else {
                    &self.base
                };
                self.dial1
                    .rows()
                    .zip(self.dial2.rows())
                    .position(|((_, a), (_, b))| base.xor(a).xor(b).is_zero())
            }
            Phase::Done => None,
        }
    }

    fn lane_syndrome(&self, m: usize) -> S {
        let a = || self.dial1.syndrome_at(m).expect("active lane");
        let b = || self.dial2.syndrome_at(m).expect("active lane");
        match self.phase {
            Phase::Weight0 => self.base.clone(),
            Phase::Weight1 => self.base.xor(a()),
            Phase::Weight2 => self.base.xor(a()).xor(b()),
            Phase::Weight3 => self.controller_base.xor(a()).xor(b()),
            Phase::Done => unreachable!("no lanes when done"),
        }
    }

    /// Advances one time step, reporting only lane count and hit.
    pub fn advance(&mut self) -> Result<Cycle> {
        if self.phase == Phase::Done {
            return Err(Error::ScheduleExhausted);
        }
        let checks = self.lanes();
        let hit = self.first_zero_lane().map(|m| self.lane_tuple(m));
        self.time_step += 1;
        let time_step = self.time_step;
        self.next_state();
        Ok(Cycle {
            time_step,
            checks,
            hit,
        })
    }

    /// Advances one time step and records every lane.
    pub fn step(&mut self) -> Result<CycleReport> {
        if self.phase == Phase::Done {
            return Err(Error::ScheduleExhausted);
        }
        let phase = self.phase;
        let controller = self.controller();
        let offset = self.offset();
        let checks: Vec<Check> = (0..self.lanes())
            .map(|m| Check {
                tuple: self.lane_tuple(m),
                syndrome: self.lane_syndrome(m).to_bitvector(self.width),
            })
            .collect();
        let hit = checks
            .iter()
            .find(|c| c.syndrome.is_zero())
            .map(|c| c.tuple.clone());
        self.time_step += 1;
        let time_step = self.time_step;
        self.next_state();
        Ok(CycleReport {
            time_step,
            phase,
            controller,
            offset,
            checks,
            hit,
        })
    }

    /// Controller and dial updates at the end of a time step.
    fn next_state(&mut self) {
        let n = self.cols.len();
        match self.phase {
            Phase::Weight0 => self.phase = Phase::Weight1,
            Phase::Weight1 => {
                if self.ab >= 2 && n >= 2 {
                    self.phase = Phase::Weight2;
                    self.shift_count = 0;
                    self.dial2.reset(self.cols);
                    self.dial2.shift();
                } else {
                    self.phase = Phase::Done;
                }
            }
            Phase::Weight2 => {
                self.shift_count += 1;
                if self.shift_count < n / 2 {
                    self.dial2.shift();
                } else if self.ab >= 3 && n >= 3 {
                    self.phase = Phase::Weight3;
                    self.dial1.reset(self.cols);
                    self.enter_subphase(1);
                } else {
                    self.phase = Phase::Done;
                }
            }
            Phase::Weight3 => {
                self.shift_count += 1;
                if self.shift_count < (n - self.controller) / 2 {
                    self.dial2.shift();
                } else if self.controller + 1 <= n - 2 {
                    self.enter_subphase(self.controller + 1);
                } else {
                    self.phase = Phase::Done;
                }
            }
            Phase::Done => {}
        }
    }

    /// Controller outputs `s_c`; dial 1 drops one more row; dial 2 is
    /// reloaded, shifted up `c` times and rotated once.
    fn enter_subphase(&mut self, c: usize) {
        self.controller = c;
        self.shift_count = 0;
        self.controller_base = self.base.xor(&self.cols[c - 1]);
        self.dial1.shift_up();
        self.dial2.reset(self.cols);
        for _ in 0..c {
            self.dial2.shift_up();
        }
        self.dial2.shift();
    }
}

/// Decodes `r` on the architecture model, stopping at the first hit.
pub fn decode(code: &LinearCode, r: &BitVector, cfg: GrandConfig) -> Result<DecodeResult> {
    match code.col_words() {
        Some(_) => run::<u64>(code, r, cfg),
        None => run::<BitVector>(code, r, cfg),
    }
}

fn run<S: Syndrome>(code: &LinearCode, r: &BitVector, cfg: GrandConfig) -> Result<DecodeResult> {
    let mut state = DialState::<S>::new(code, r, cfg)?;
    let mut queries = 0u64;
    while !state.is_done() {
        let cycle = state.advance()?;
        queries += cycle.checks as u64;
        if let Some(tuple) = cycle.hit {
            return Ok(DecodeResult::decoded(code, r, tuple, queries, cycle.time_step));
        }
    }
    Ok(DecodeResult::abandoned(
        queries,
        worst_case_cycles(code.n(), cfg.ab)?,
    ))
}

/// Runs the full schedule regardless of hits and returns every report.
pub fn full_trace(code: &LinearCode, r: &BitVector, cfg: GrandConfig) -> Result<Vec<CycleReport>> {
    let mut state = init(code, r, cfg)?;
    let mut out = Vec::new();
    while !state.is_done() {
        out.push(state.step()?);
    }
    Ok(out)
}
