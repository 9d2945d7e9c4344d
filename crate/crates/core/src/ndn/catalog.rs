use alloc::vec::Vec;
use core::fmt;

use crate::engine::RngStream;
use crate::numeric::CompensatedSum;

#[derive(Debug, Clone, PartialEq)]
pub enum CatalogError {
    InvalidPlateau(f64),
    InvalidShape(f64),
    EmptyCatalog,
    RankOutOfRange { rank: u32, file_count: u32 },
}

impl fmt::Display for CatalogError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogError::InvalidPlateau(q) => write!(f, "plateau factor q = {q} must be finite and >= 0"),
            CatalogError::InvalidShape(s) => write!(f, "shaping factor s = {s} must lie in [0.5, 2.5]"),
            CatalogError::EmptyCatalog => f.write_str("catalog needs at least one file and one chunk per file"),
            CatalogError::RankOutOfRange { rank, file_count } => {
                write!(f, "rank {rank} outside [1, {file_count}]")
            }
        }
    }
}

impl core::error::Error for CatalogError {}

#[inline]
fn mzipf_weight(rank: u32, q: f64, s: f64) -> f64 {
    1.0 / libm::pow(rank as f64 + q, s)
}

/// Mandelbrot-Zipf popularity over ranks `1..=file_count`:
/// `p(i) = (i + q)^-s / sum_j (j + q)^-s`.
///
/// The cumulative table is built once and drives inverse-CDF sampling.
#[derive(Debug, Clone)]
pub struct CatalogModel {
    q: f64,
    s: f64,
    file_count: u32,
    chunks_per_file: u32,
    normalizer: f64,
    cdf: Vec<f64>,
}

impl CatalogModel {
    pub fn new(q: f64, s: f64, file_count: u32, chunks_per_file: u32) -> Result<Self, CatalogError> {
        if !(q >= 0.0) || !q.is_finite() {
            return Err(CatalogError::InvalidPlateau(q));
        }
        if !(0.5..=2.5).contains(&s) {
            return Err(CatalogError::InvalidShape(s));
        }
        if file_count == 0 || chunks_per_file == 0 {
            return Err(CatalogError::EmptyCatalog);
        }

        let mut acc = CompensatedSum::new();
        let mut running = Vec::with_capacity(file_count as usize);
        for i in 1..=file_count {
            acc.add(mzipf_weight(i, q, s));
            running.push(acc.value());
        }
        let normalizer = acc.value();
        let mut cdf: Vec<f64> = running.into_iter().map(|c| c / normalizer).collect();
        if let Some(last) = cdf.last_mut() {
            *last = 1.0;
        }
        Ok(Self {
            q,
            s,
            file_count,
            chunks_per_file,
            normalizer,
            cdf,
        })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn file_count(&self) -> u32 {
        self.file_count
    }

    pub fn chunks_per_file(&self) -> u32 {
        self.chunks_per_file
    }

    pub fn pmf(&self, rank: u32) -> Result<f64, CatalogError> {
        if rank == 0 || rank > self.file_count {
            return Err(CatalogError::RankOutOfRange {
                rank,
                file_count: self.file_count,
            });
        }
        Ok(mzipf_weight(rank, self.q, self.s) / self.normalizer)
    }

    /// `P(rank <= k)`, read from the cumulative table.
    pub fn cdf(&self, k: u32) -> f64 {
        match k {
            0 => 0.0,
            k if k >= self.file_count => 1.0,
            k => self.cdf[k as usize - 1],
        }
    }

    /// Draws a rank by binary search of the cumulative table.
    pub fn sample(&self, rng: &mut RngStream) -> u32 {
        let u = rng.uniform();
        let idx = self.cdf.partition_point(|&c| c <= u);
        (idx as u32 + 1).min(self.file_count)
    }
}

/// Probability mass of the `top` most popular ranks, by direct summation
/// without materializing a table.
pub fn mzipf_head_mass(q: f64, s: f64, file_count: u32, top: u32) -> f64 {
    let top = top.min(file_count);
    let mut head = CompensatedSum::new();
    let mut tail = CompensatedSum::new();
    for i in 1..=file_count {
        let w = mzipf_weight(i, q, s);
        if i <= top {
            head.add(w);
        } else {
            tail.add(w);
        }
    }
    let head = head.value();
    head / (head + tail.value())
}
