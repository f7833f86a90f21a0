//! A small probabilistic machine with a two-way random tape.
//!
//! Descriptions are bit strings read four bits at a time; every group is one
//! instruction and every bit string decodes to a program. The program counter
//! is the machine state. After the last instruction control wraps to the
//! first, so a program runs until it executes `HALT`, fills its output, or
//! runs out of budget.
//!
//! The machine has
//! * a read-only input tape holding its arguments separated by `#`, with end
//!   markers on both sides, and a two-way head starting on the first cell;
//! * a read-only random tape with a two-way head; cells are drawn on first
//!   visit, and the head only moves right through `RAND_OUT`, so a run reads
//!   at most one random bit more than it outputs;
//! * a work tape over `{0, 1, blank}`, allocated on write and capped by the
//!   budget;
//! * a write-only output tape.
//!
//! | code | op | effect |
//! |---|---|---|
//! | 0 | `HALT` | stop |
//! | 1 | `IN_LEFT` | input head left |
//! | 2 | `COPY` | output the input bit under the head (if any), head right |
//! | 3 | `IN_RIGHT` | input head right |
//! | 4 | `RAND_OUT` | output the random bit under the head, head right |
//! | 5 | `RAND_LEFT` | random head left |
//! | 6 | `OUT1` | output 1 |
//! | 7 | `SKIP_IF_IN1` | skip the next instruction if the input cell is 1 |
//! | 8 | `OUT0` | output 0 |
//! | 9 | `SKIP_IF_NOT_BIT` | skip the next instruction on `#` or an end marker |
//! | 10 | `SKIP_IF_RAND1` | skip the next instruction if the random cell is 1 |
//! | 11 | `WORK_LEFT` | work head left |
//! | 12 | `WRITE_IN` | copy the input cell to the work tape, work head right |
//! | 13 | `SKIP_IF_WORK1` | skip the next instruction if the work cell is 1 |
//! | 14 | `OUT_WORK` | output the work cell (if not blank) |
//! | 15 | `RESTART` | jump to the first instruction |
//!
//! Short descriptions are right-padded with zeros, so one- to three-bit
//! descriptions land on the even codes, which are the useful ones alone.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::error::{guard, Result};
use crate::stream::RandomStream;

pub const OPCODE_BITS: usize = 4;
/// Longest description [`enumerate_machines`] accepts.
pub const MAX_DESCRIPTION_BITS: usize = 16;
/// Most random paths [`enumerate_paths`] will expand.
pub const PATH_LIMIT: usize = 1 << 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Op {
    Halt,
    InLeft,
    Copy,
    InRight,
    RandOut,
    RandLeft,
    Out1,
    SkipIfIn1,
    Out0,
    SkipIfNotBit,
    SkipIfRand1,
    WorkLeft,
    WriteIn,
    SkipIfWork1,
    OutWork,
    Restart,
}

impl Op {
    const ALL: [Op; 16] = [
        Op::Halt,
        Op::InLeft,
        Op::Copy,
        Op::InRight,
        Op::RandOut,
        Op::RandLeft,
        Op::Out1,
        Op::SkipIfIn1,
        Op::Out0,
        Op::SkipIfNotBit,
        Op::SkipIfRand1,
        Op::WorkLeft,
        Op::WriteIn,
        Op::SkipIfWork1,
        Op::OutWork,
        Op::Restart,
    ];

    pub fn from_code(code: u8) -> Op {
        Op::ALL[(code & 0xf) as usize]
    }

    pub fn code(self) -> u8 {
        self as u8
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Machine {
    pub program: Vec<Op>,
}

impl Machine {
    /// Inverse of [`decode`] for programs; four bits per instruction.
    pub fn encode(&self) -> BitString {
        let mut out = BitString::with_capacity(self.program.len() * OPCODE_BITS);
        for op in &self.program {
            out.extend_from(&BitString::from_u64(op.code() as u64, OPCODE_BITS));
        }
        out
    }
}

impl fmt::Display for Machine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.program.iter().map(|op| format!("{op:?}")).collect();
        write!(f, "[{}]", names.join(" "))
    }
}

/// Total decoding: groups of four bits, the last one right-padded with
/// zeros; the empty description is the one-instruction halting machine.
pub fn decode(bits: &BitString) -> Machine {
    if bits.is_empty() {
        return Machine {
            program: vec![Op::Halt],
        };
    }
    let program = bits
        .as_slice()
        .chunks(OPCODE_BITS)
        .map(|chunk| {
            let code = (0..OPCODE_BITS).fold(0u8, |acc, i| (acc << 1) | chunk.get(i).copied().unwrap_or(false) as u8);
            Op::from_code(code)
        })
        .collect();
    Machine { program }
}

/// A description as stored in fixture files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MachineFixture {
    pub bits: BitString,
    #[serde(default)]
    pub note: String,
}

/// Every description of length `0..=max_bits`, shorter first, then
/// lexicographic.
pub fn enumerate_machines(max_bits: usize) -> Result<impl Iterator<Item = (BitString, Machine)>> {
    guard(
        "description length",
        max_bits as u64,
        MAX_DESCRIPTION_BITS as u64,
    )?;
    Ok((0..=max_bits).flat_map(BitString::all).map(|b| {
        let m = decode(&b);
        (b, m)
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncationBudget {
    pub max_steps: u64,
    pub max_work_cells: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Truncation {
    Time,
    Space,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Outcome {
    Halted { output: BitString, steps: u64 },
    Truncated { reason: Truncation },
}

impl Outcome {
    /// The output; empty for a truncated run.
    pub fn output(&self) -> &BitString {
        static EMPTY: BitString = BitString::new();
        match self {
            Outcome::Halted { output, .. } => output,
            Outcome::Truncated { .. } => &EMPTY,
        }
    }

    pub fn is_truncated(&self) -> bool {
        matches!(self, Outcome::Truncated { .. })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Cell {
    Zero,
    One,
    Sep,
    End,
}

/// Input tape contents `a_1 # a_2 # .. # a_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputTape {
    cells: Vec<Cell>,
}

impl InputTape {
    pub fn new(parts: &[&BitString]) -> Self {
        let mut cells = Vec::new();
        for (i, part) in parts.iter().enumerate() {
            if i > 0 {
                cells.push(Cell::Sep);
            }
            cells.extend(part.iter().map(|b| if b { Cell::One } else { Cell::Zero }));
        }
        Self { cells }
    }

    fn at(&self, head: isize) -> Cell {
        if head < 0 {
            Cell::End
        } else {
            self.cells.get(head as usize).copied().unwrap_or(Cell::End)
        }
    }

    fn len(&self) -> isize {
        self.cells.len() as isize
    }
}

/// One line of a trace dump.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub step: u64,
    pub pc: usize,
    pub op: Op,
    pub input_head: isize,
    pub random_head: usize,
    pub work_head: usize,
    pub work: String,
}

/// The full configuration of a run in progress.
#[derive(Clone, Debug)]
struct Execution {
    pc: usize,
    input_head: isize,
    random_head: usize,
    random: Vec<bool>,
    work: Vec<Option<bool>>,
    work_head: usize,
    output: BitString,
    steps: u64,
}

enum Status {
    Done(Outcome),
    NeedBit,
}

impl Execution {
    fn new() -> Self {
        Self {
            pc: 0,
            input_head: 0,
            random_head: 0,
            random: Vec::new(),
            work: Vec::new(),
            work_head: 0,
            output: BitString::new(),
            steps: 0,
        }
    }

    fn random_cell(&self) -> Option<bool> {
        self.random.get(self.random_head).copied()
    }

    fn work_dump(&self) -> String {
        self.work
            .iter()
            .map(|c| match c {
                None => '_',
                Some(false) => '0',
                Some(true) => '1',
            })
            .collect()
    }

    /// Runs until the machine stops or reads a random cell not yet drawn.
    fn advance(
        &mut self,
        machine: &Machine,
        tape: &InputTape,
        budget: &TruncationBudget,
        max_output: usize,
        mut trace: Option<&mut Vec<TraceStep>>,
    ) -> Status {
        let len = machine.program.len();
        loop {
            if self.output.len() >= max_output {
                return Status::Done(self.halted());
            }
            if self.steps >= budget.max_steps {
                return Status::Done(Outcome::Truncated {
                    reason: Truncation::Time,
                });
            }
            let op = machine.program[self.pc];
            if matches!(op, Op::RandOut | Op::SkipIfRand1) && self.random_cell().is_none() {
                return Status::NeedBit;
            }
            if let Some(t) = trace.as_deref_mut() {
                t.push(TraceStep {
                    step: self.steps,
                    pc: self.pc,
                    op,
                    input_head: self.input_head,
                    random_head: self.random_head,
                    work_head: self.work_head,
                    work: self.work_dump(),
                });
            }
            self.steps += 1;
            let cell = tape.at(self.input_head);
            let mut skip = false;
            let mut next = self.pc + 1;
            match op {
                Op::Halt => return Status::Done(self.halted()),
                Op::InLeft => self.input_head = (self.input_head - 1).max(-1),
                Op::Copy => {
                    match cell {
                        Cell::Zero => self.output.push(false),
                        Cell::One => self.output.push(true),
                        _ => {}
                    }
                    self.input_head = (self.input_head + 1).min(tape.len());
                }
                Op::InRight => self.input_head = (self.input_head + 1).min(tape.len()),
                Op::RandOut => {
                    let bit = self.random[self.random_head];
                    self.output.push(bit);
                    self.random_head += 1;
                }
                Op::RandLeft => self.random_head = self.random_head.saturating_sub(1),
                Op::Out1 => self.output.push(true),
                Op::SkipIfIn1 => skip = cell == Cell::One,
                Op::Out0 => self.output.push(false),
                Op::SkipIfNotBit => skip = matches!(cell, Cell::Sep | Cell::End),
                Op::SkipIfRand1 => skip = self.random[self.random_head],
                Op::WorkLeft => self.work_head = self.work_head.saturating_sub(1),
                Op::WriteIn => {
                    if self.work_head >= budget.max_work_cells {
                        return Status::Done(Outcome::Truncated {
                            reason: Truncation::Space,
                        });
                    }
                    if self.work.len() <= self.work_head {
                        self.work.resize(self.work_head + 1, None);
                    }
                    self.work[self.work_head] = match cell {
                        Cell::Zero => Some(false),
                        Cell::One => Some(true),
                        _ => None,
                    };
                    self.work_head += 1;
                }
                Op::SkipIfWork1 => skip = self.work.get(self.work_head) == Some(&Some(true)),
                Op::OutWork => {
                    if let Some(Some(bit)) = self.work.get(self.work_head) {
                        self.output.push(*bit);
                    }
                }
                Op::Restart => next = 0,
            }
            if skip {
                next += 1;
            }
            self.pc = next % len;
        }
    }

    fn halted(&self) -> Outcome {
        Outcome::Halted {
            output: self.output.clone(),
            steps: self.steps,
        }
    }
}

/// Runs `machine` on `input`, drawing random cells from `random` on demand.
pub fn run_truncated(
    machine: &Machine,
    input: &InputTape,
    random: &mut RandomStream,
    budget: &TruncationBudget,
    max_output: usize,
) -> Outcome {
    run_inner(machine, input, random, budget, max_output, None)
}

/// [`run_truncated`] with a step-by-step dump.
pub fn run_traced(
    machine: &Machine,
    input: &InputTape,
    random: &mut RandomStream,
    budget: &TruncationBudget,
    max_output: usize,
) -> (Outcome, Vec<TraceStep>) {
    let mut trace = Vec::new();
    let outcome = run_inner(machine, input, random, budget, max_output, Some(&mut trace));
    (outcome, trace)
}

fn run_inner(
    machine: &Machine,
    input: &InputTape,
    random: &mut RandomStream,
    budget: &TruncationBudget,
    max_output: usize,
    mut trace: Option<&mut Vec<TraceStep>>,
) -> Outcome {
    let mut exec = Execution::new();
    loop {
        match exec.advance(machine, input, budget, max_output, trace.as_deref_mut()) {
            Status::Done(outcome) => return outcome,
            Status::NeedBit => exec.random.push(random.next_bit()),
        }
    }
}

/// One complete random path: the cells drawn, in order, and where they led.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathLeaf {
    pub random: BitString,
    pub outcome: Outcome,
}

impl PathLeaf {
    /// `2^-(cells drawn)`.
    pub fn probability(&self) -> BigRational {
        BigRational::new(BigInt::one(), BigInt::one() << self.random.len())
    }
}

/// Every random path of the run, in lexicographic order of the cells drawn.
/// The leaf probabilities sum to 1.
pub fn enumerate_paths(
    machine: &Machine,
    input: &InputTape,
    budget: &TruncationBudget,
    max_output: usize,
) -> Result<Vec<PathLeaf>> {
    let mut leaves = Vec::new();
    let mut stack = vec![Execution::new()];
    while let Some(mut exec) = stack.pop() {
        match exec.advance(machine, input, budget, max_output, None) {
            Status::Done(outcome) => leaves.push(PathLeaf {
                random: exec.random.iter().copied().collect(),
                outcome,
            }),
            Status::NeedBit => {
                let mut one = exec.clone();
                one.random.push(true);
                exec.random.push(false);
                stack.push(one);
                stack.push(exec);
            }
        }
        guard(
            "random paths",
            (leaves.len() + stack.len()) as u64,
            PATH_LIMIT as u64,
        )?;
    }
    Ok(leaves)
}

/// Exact output distribution of a run: distinct outcomes with their
/// probabilities, ordered by outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutcomeDistribution {
    pub entries: Vec<(Outcome, BigRational)>,
    pub paths: usize,
}

impl OutcomeDistribution {
    pub fn exact(
        machine: &Machine,
        input: &InputTape,
        budget: &TruncationBudget,
        max_output: usize,
    ) -> Result<Self> {
        let leaves = enumerate_paths(machine, input, budget, max_output)?;
        let paths = leaves.len();
        let mut merged: std::collections::BTreeMap<Outcome, BigRational> = Default::default();
        for leaf in leaves {
            let p = leaf.probability();
            *merged.entry(leaf.outcome).or_insert_with(BigRational::zero) += p;
        }
        Ok(Self {
            entries: merged.into_iter().collect(),
            paths,
        })
    }

    /// Probability that the run halts with an output satisfying `event`.
    /// Truncated runs are offered the empty output.
    pub fn probability(&self, mut event: impl FnMut(&BitString) -> bool) -> BigRational {
        self.entries
            .iter()
            .filter(|(o, _)| event(o.output()))
            .fold(BigRational::zero(), |acc, (_, p)| acc + p)
    }

    pub fn is_deterministic(&self) -> bool {
        self.entries.len() == 1
    }
}
