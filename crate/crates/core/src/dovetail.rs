//! Triangular dovetailing of countably many step-wise computations.
//!
//! Round `r` (1-based) starts task `r-1` and then gives one step to every
//! task `0..r` that has not halted, so after `s` rounds task `i` has received
//! `max(0, s-i)` steps (fewer only if it halted earlier).

/// A computation that can be advanced one step at a time.
pub trait Task {
    type Value;
    type Error;

    /// Result, once the task has halted.
    fn halted(&self) -> Option<Self::Value>;
    fn step(&mut self) -> Result<(), Self::Error>;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discovery<V> {
    pub task: u64,
    /// Steps the task needed.
    pub local_steps: u64,
    /// 1-based round in which the halt was observed.
    pub round: u64,
    /// Number of steps executed by the whole run before the halt was observed.
    pub global_step: u64,
    pub value: V,
}

struct Slot<T> {
    task: T,
    given: u64,
    done: bool,
}

pub struct DovetailRun<T: Task, G> {
    spawn: G,
    slots: Vec<Slot<T>>,
    round: u64,
    global_step: u64,
    log: Vec<Discovery<<T as Task>::Value>>,
}

impl<T, G> DovetailRun<T, G>
where
    T: Task,
    G: FnMut(u64) -> T,
{
    pub fn new(spawn: G) -> Self {
        DovetailRun {
            spawn,
            slots: Vec::new(),
            round: 0,
            global_step: 0,
            log: Vec::new(),
        }
    }

    fn record(&mut self, index: usize) {
        let slot = &mut self.slots[index];
        if let Some(value) = slot.task.halted() {
            slot.done = true;
            self.log.push(Discovery {
                task: index as u64,
                local_steps: slot.given,
                round: self.round,
                global_step: self.global_step,
                value,
            });
        }
    }

    pub fn run_round(&mut self) -> Result<(), T::Error> {
        self.round += 1;
        let fresh = (self.spawn)(self.slots.len() as u64);
        self.slots.push(Slot {
            task: fresh,
            given: 0,
            done: false,
        });
        let newest = self.slots.len() - 1;
        self.record(newest);
        for i in 0..self.slots.len() {
            if self.slots[i].done {
                continue;
            }
            self.slots[i].task.step()?;
            self.slots[i].given += 1;
            self.global_step += 1;
            self.record(i);
        }
        Ok(())
    }

    pub fn run_rounds(&mut self, rounds: u64) -> Result<(), T::Error> {
        for _ in 0..rounds {
            self.run_round()?;
        }
        Ok(())
    }

    pub fn round(&self) -> u64 {
        self.round
    }

    pub fn global_steps(&self) -> u64 {
        self.global_step
    }

    /// Steps received so far by task `index` (0 if not yet started).
    pub fn steps_given(&self, index: usize) -> u64 {
        self.slots.get(index).map_or(0, |s| s.given)
    }

    pub fn log(&self) -> &[Discovery<T::Value>] {
        &self.log
    }

    pub fn into_log(self) -> Vec<Discovery<T::Value>> {
        self.log
    }
}

/// Discovery log after `rounds` rounds.
pub fn dovetail<T, G>(spawn: G, rounds: u64) -> Result<Vec<Discovery<T::Value>>, T::Error>
where
    T: Task,
    G: FnMut(u64) -> T,
{
    let mut run = DovetailRun::new(spawn);
    run.run_rounds(rounds)?;
    Ok(run.into_log())
}

/// Largest `s` with `s(s+1)/2 <= budget`: the rounds a step budget pays for.
pub fn rounds_for_budget(budget: u64) -> u64 {
    let mut s = ((2.0 * budget as f64).sqrt()) as u64;
    while s * (s + 1) / 2 > budget {
        s -= 1;
    }
    while (s + 1) * (s + 2) / 2 <= budget {
        s += 1;
    }
    s
}

/// Inverse of the Cantor pairing: task index `i` to the pair it stands for.
pub fn cantor_unpair(i: u64) -> (u64, u64) {
    let w = rounds_for_budget(i);
    let t = w * (w + 1) / 2;
    let y = i - t;
    (w - y, y)
}

pub fn cantor_pair(x: u64, y: u64) -> u64 {
    (x + y) * (x + y + 1) / 2 + y
}
