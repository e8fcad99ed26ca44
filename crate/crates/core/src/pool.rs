//! Bounded training-pair pool.
//!
//! Decouples on-the-fly synthesis from batch consumption: producers push
//! pairs, the consumer draws uniform random batches without replacement, and
//! drawn slots free up for new pushes. Mixing many in-flight pairs this way
//! raises the degradation diversity inside each batch.
//!
//! Entries are drawn-once: every pushed entry is returned by exactly one
//! draw. A full pool signals back-pressure (blocking or `Err`), never data
//! loss. The first draw additionally waits for a warm-up fill of
//! `max(batch, capacity / 2)` so early batches are not starved of variety.

use std::sync::{Condvar, Mutex};

use crate::error::{Error, Result};
use crate::rng::RandomSource;

pub const DEFAULT_POOL_CAPACITY: usize = 180;

struct State<T> {
    entries: Vec<T>,
    warmed: bool,
}

pub struct PairPool<T> {
    capacity: usize,
    state: Mutex<State<T>>,
    space: Condvar,
    items: Condvar,
}

impl<T> PairPool<T> {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity > 0, "pool capacity must be positive");
        Self {
            capacity,
            state: Mutex::new(State {
                entries: Vec::with_capacity(capacity),
                warmed: false,
            }),
            space: Condvar::new(),
            items: Condvar::new(),
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.state.lock().unwrap().entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Non-blocking push; a full pool hands the entry back.
    pub fn try_push(&self, entry: T) -> std::result::Result<(), T> {
        let mut state = self.state.lock().unwrap();
        if state.entries.len() >= self.capacity {
            return Err(entry);
        }
        state.entries.push(entry);
        drop(state);
        self.items.notify_all();
        Ok(())
    }

    /// Push, blocking while the pool is full.
    pub fn push(&self, entry: T) {
        let mut state = self.state.lock().unwrap();
        while state.entries.len() >= self.capacity {
            state = self.space.wait(state).unwrap();
        }
        state.entries.push(entry);
        drop(state);
        self.items.notify_all();
    }

    fn required(&self, batch: usize, warmed: bool) -> usize {
        if warmed {
            batch
        } else {
            batch.max(self.capacity / 2)
        }
    }

    fn take(&self, state: &mut State<T>, batch: usize, rng: &mut RandomSource) -> Vec<T> {
        let mut out = Vec::with_capacity(batch);
        for _ in 0..batch {
            let idx = rng.index(state.entries.len());
            out.push(state.entries.swap_remove(idx));
        }
        state.warmed = true;
        out
    }

    fn check_batch(&self, batch: usize) -> Result<()> {
        if batch == 0 || batch > self.capacity {
            return Err(Error::InvalidParam(format!(
                "batch size {batch} must lie in [1, {}]",
                self.capacity
            )));
        }
        Ok(())
    }

    /// Non-blocking draw of `batch` entries uniformly without replacement.
    /// Underfull pools (including an unmet warm-up fill) return an error.
    pub fn try_draw_batch(&self, batch: usize, rng: &mut RandomSource) -> Result<Vec<T>> {
        self.check_batch(batch)?;
        let mut state = self.state.lock().unwrap();
        let need = self.required(batch, state.warmed);
        if state.entries.len() < need {
            return Err(Error::PoolUnderfull {
                len: state.entries.len(),
                requested: need,
            });
        }
        let out = self.take(&mut state, batch, rng);
        drop(state);
        self.space.notify_all();
        Ok(out)
    }

    /// Draw `batch` entries uniformly without replacement, blocking until
    /// the pool holds enough (and the warm-up fill is met on the first
    /// draw).
    pub fn draw_batch(&self, batch: usize, rng: &mut RandomSource) -> Result<Vec<T>> {
        self.check_batch(batch)?;
        let mut state = self.state.lock().unwrap();
        loop {
            let need = self.required(batch, state.warmed);
            if state.entries.len() >= need {
                break;
            }
            state = self.items.wait(state).unwrap();
        }
        let out = self.take(&mut state, batch, rng);
        drop(state);
        self.space.notify_all();
        Ok(out)
    }
}
