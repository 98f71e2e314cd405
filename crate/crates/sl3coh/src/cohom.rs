//! Characters of H^i(μ) for every weight μ.
//!
//! Every weight is reduced by the Weyl-group dualities to a pair (m, n) with
//! μ = (m, −n−2) and m ≥ n ≥ 0. For such pairs H² is computed by the
//! three-term leading-digit recursion and H¹ = H² − χ(μ).

use std::collections::HashMap;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use crate::charring::{CharTable, Character};
use crate::error::{domain, Result};
use crate::lattice::{chamber_pair, hat_window, Prime, Weight};

pub const CACHE_VERSION: u32 = 1;

/// ch H¹ and ch H² of (m, −n−2), m ≥ n ≥ 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorePair {
    pub h1: Character,
    pub h2: Character,
}

#[derive(Serialize, Deserialize)]
struct CacheHeader {
    version: u32,
    p: i64,
}

#[derive(Serialize, Deserialize)]
struct CacheRecord {
    m: i64,
    n: i64,
    h1: Character,
    h2: Character,
}

/// Memoizing cohomology engine for one prime. Safe to share between threads.
pub struct Engine {
    p: Prime,
    table: CharTable,
    core: RwLock<HashMap<(i64, i64), Arc<CorePair>>>,
}

impl Engine {
    pub fn new(p: Prime) -> Engine {
        Engine { p, table: CharTable::new(p), core: RwLock::new(HashMap::new()) }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn table(&self) -> &CharTable {
        &self.table
    }

    pub fn chi(&self, mu: Weight) -> Result<Arc<Character>> {
        self.table.chi(mu)
    }

    pub fn simple(&self, lambda: Weight) -> Result<Arc<Character>> {
        self.table.simple(lambda)
    }

    /// twist(ch L(0, a), d); zero when a < 0.
    pub fn twisted_row(&self, a: i64, d: u32) -> Result<Character> {
        if a < 0 {
            return Ok(Character::zero());
        }
        self.simple(Weight::new(0, a))?.twist(d, self.p)
    }

    pub fn cached_entries(&self) -> usize {
        self.core.read().unwrap().len()
    }

    /// H¹ and H² of (m, −n−2) for m ≥ n ≥ 0.
    pub fn core(&self, m: i64, n: i64) -> Result<Arc<CorePair>> {
        if n < 0 || m < n {
            return Err(domain(format!("core instance needs m >= n >= 0, got m={m}, n={n}")));
        }
        if let Some(hit) = self.core.read().unwrap().get(&(m, n)) {
            return Ok(hit.clone());
        }
        let h2 = self.compute_h2(m, n)?;
        let h1 = h2.minus(&*self.chi(Weight::new(m, -n - 2))?)?;
        let pair = Arc::new(CorePair { h1, h2 });
        Ok(self.core.write().unwrap().entry((m, n)).or_insert(pair).clone())
    }

    pub fn core_h2(&self, m: i64, n: i64) -> Result<Character> {
        Ok(self.core(m, n)?.h2.clone())
    }

    pub fn core_h1(&self, m: i64, n: i64) -> Result<Character> {
        Ok(self.core(m, n)?.h1.clone())
    }

    fn compute_h2(&self, m: i64, n: i64) -> Result<Character> {
        if n == 0 {
            return Ok(Character::zero());
        }
        let Some(w) = hat_window(m, n, self.p)? else {
            return Ok(Character::zero());
        };
        let q = self.p.pow(w.d)?;
        let top = self.twisted_row(w.a - 1, w.d)?.times(&self.table.weyl(Weight::new(w.s, q - w.r - 2)))?;
        let middle = self.twisted_row(w.a, w.d)?.times(&self.coh_char(2, Weight::new(w.r, -w.s - 2))?)?;
        let bottom = if w.a >= 2 {
            self.twisted_row(w.a - 2, w.d)?.times(&self.coh_char(2, Weight::new(w.r - q, q - w.s - 2))?)?
        } else {
            Character::zero()
        };
        top.plus(&middle)?.plus(&bottom)
    }

    /// ch H^i(μ).
    pub fn coh_char(&self, i: u8, mu: Weight) -> Result<Character> {
        if i > 3 {
            return Err(domain(format!("cohomological degree {i} is outside 0..=3")));
        }
        if mu.a == -1 || mu.b == -1 {
            return Ok(Character::zero());
        }
        if mu.is_dominant() {
            return Ok(if i == 0 { (*self.chi(mu)?).clone() } else { Character::zero() });
        }
        if mu.is_antidominant() {
            return Ok(if i == 3 { (*self.chi(mu.w0_dot())?).clone() } else { Character::zero() });
        }
        let (m, n, transposed) = chamber_pair(mu).expect("remaining weights are in chamber form");
        if transposed {
            return Ok(self.coh_char(i, Weight::new(m, -n - 2))?.transpose());
        }
        if m < n {
            return self.coh_char(3 - i, mu.w0_dot());
        }
        match i {
            1 => self.core_h1(m, n),
            2 => self.core_h2(m, n),
            _ => Ok(Character::zero()),
        }
    }

    /// [H⁰, H¹, H², H³] of μ.
    pub fn coh_all(&self, mu: Weight) -> Result<[Character; 4]> {
        Ok([self.coh_char(0, mu)?, self.coh_char(1, mu)?, self.coh_char(2, mu)?, self.coh_char(3, mu)?])
    }

    /// Writes every memoized core instance, sorted by key.
    pub fn save_cache(&self, path: &Path) -> Result<()> {
        let io = |e: std::io::Error| domain(format!("cache write failed: {e}"));
        let mut out = BufWriter::new(fs::File::create(path).map_err(io)?);
        let header = CacheHeader { version: CACHE_VERSION, p: self.p.get() };
        writeln!(out, "{}", serde_json::to_string(&header).expect("header serializes")).map_err(io)?;
        let guard = self.core.read().unwrap();
        let mut keys: Vec<_> = guard.keys().copied().collect();
        keys.sort_unstable();
        for (m, n) in keys {
            let pair = &guard[&(m, n)];
            let rec = CacheRecord { m, n, h1: pair.h1.clone(), h2: pair.h2.clone() };
            writeln!(out, "{}", serde_json::to_string(&rec).expect("record serializes")).map_err(io)?;
        }
        out.flush().map_err(io)
    }

    /// Loads a cache file written by [`Engine::save_cache`]. Returns the number
    /// of records read. Refuses files for another version or prime.
    pub fn load_cache(&self, path: &Path) -> Result<usize> {
        let io = |e: std::io::Error| domain(format!("cache read failed: {e}"));
        let bad = |e: serde_json::Error| domain(format!("cache file is malformed: {e}"));
        let file = fs::File::open(path).map_err(io)?;
        let mut lines = BufReader::new(file).lines();
        let header: CacheHeader = match lines.next() {
            Some(line) => serde_json::from_str(&line.map_err(io)?).map_err(bad)?,
            None => return Err(domain("cache file is empty")),
        };
        if header.version != CACHE_VERSION {
            return Err(domain(format!("cache version {} is not {CACHE_VERSION}", header.version)));
        }
        if header.p != self.p.get() {
            return Err(domain(format!("cache was written for p={}, not p={}", header.p, self.p)));
        }
        let mut records = Vec::new();
        for line in lines {
            let line = line.map_err(io)?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: CacheRecord = serde_json::from_str(&line).map_err(bad)?;
            if rec.n < 0 || rec.m < rec.n {
                return Err(domain(format!("cache record ({}, {}) is not normalized", rec.m, rec.n)));
            }
            records.push(rec);
        }
        let count = records.len();
        let mut guard = self.core.write().unwrap();
        for rec in records {
            guard.entry((rec.m, rec.n)).or_insert_with(|| Arc::new(CorePair { h1: rec.h1, h2: rec.h2 }));
        }
        Ok(count)
    }
}

/// One-shot helper; prefer a long-lived [`Engine`] for repeated queries.
pub fn coh_char(i: u8, mu: Weight, p: Prime) -> Result<Character> {
    Engine::new(p).coh_char(i, mu)
}
