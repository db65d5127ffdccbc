//! Shared parameter storage for lock-free data-parallel training.
//!
//! Workers read and write rows without synchronization (relaxed atomics,
//! last write wins). With a single worker the update sequence is identical
//! to plain sequential code, which is what the deterministic mode relies on.

use std::sync::atomic::{AtomicU32, AtomicU64, Ordering};

pub(crate) struct AtomicF32Slice {
    data: Vec<AtomicU32>,
}

impl AtomicF32Slice {
    pub fn from_vec(init: Vec<f32>) -> Self {
        AtomicF32Slice {
            data: init.into_iter().map(|v| AtomicU32::new(v.to_bits())).collect(),
        }
    }

    #[inline]
    pub fn get(&self, i: usize) -> f32 {
        f32::from_bits(self.data[i].load(Ordering::Relaxed))
    }

    #[inline]
    pub fn set(&self, i: usize, v: f32) {
        self.data[i].store(v.to_bits(), Ordering::Relaxed);
    }

    #[inline]
    pub fn add(&self, i: usize, v: f32) {
        self.set(i, self.get(i) + v);
    }

    pub fn to_vec(&self) -> Vec<f32> {
        (0..self.data.len()).map(|i| self.get(i)).collect()
    }
}

pub(crate) struct AtomicF64Slice {
    data: Vec<AtomicU64>,
}

impl AtomicF64Slice {
    pub fn from_vec(init: Vec<f64>) -> Self {
        AtomicF64Slice {
            data: init.into_iter().map(|v| AtomicU64::new(v.to_bits())).collect(),
        }
    }

    #[inline]
    pub fn get(&self, i: usize) -> f64 {
        f64::from_bits(self.data[i].load(Ordering::Relaxed))
    }

    #[inline]
    pub fn set(&self, i: usize, v: f64) {
        self.data[i].store(v.to_bits(), Ordering::Relaxed);
    }
}
