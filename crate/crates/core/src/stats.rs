//! Histograms, percentiles and dispersion summaries.
//!
//! Accumulators ([`LinearCounts`], [`LogCounts`], [`DegreeAverages`]) merge
//! associatively and commutatively so partial results from parallel workers
//! can be combined in any order.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{NodeId, TemporalContactGraph};
use crate::spread::FastestRouteTree;

pub const DEFAULT_LOG_FACTOR: f64 = 1.25;
pub const DEFAULT_DEGREE_BIN: f64 = 0.25;
pub const COMPARISON_DEGREE_BIN: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Binning {
    Linear { width: f64 },
    Logarithmic { factor: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bin {
    pub left: f64,
    pub right: f64,
    pub density: f64,
}

impl Bin {
    pub fn width(&self) -> f64 {
        self.right - self.left
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.left + self.right)
    }

    /// Probability mass of the bin.
    pub fn mass(&self) -> f64 {
        self.density * self.width()
    }
}

/// Normalized density over contiguous bins.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub binning: Binning,
    pub bins: Vec<Bin>,
    pub sample_count: u64,
}

impl Histogram {
    fn empty(binning: Binning) -> Self {
        Histogram {
            binning,
            bins: Vec::new(),
            sample_count: 0,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.sample_count == 0
    }

    pub fn total_mass(&self) -> f64 {
        self.bins.iter().map(Bin::mass).sum()
    }

    /// Bin with the highest density; the leftmost one on ties.
    pub fn mode(&self) -> Option<&Bin> {
        self.bins.iter().fold(None, |best: Option<&Bin>, b| match best {
            Some(x) if x.density >= b.density => Some(x),
            _ => Some(b),
        })
    }

    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "bin_left,bin_right,density")?;
        for b in &self.bins {
            writeln!(w, "{},{},{}", b.left, b.right, b.density)?;
        }
        Ok(())
    }
}

/// Counts on bins `[k * width, (k + 1) * width)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearCounts {
    width: f64,
    counts: BTreeMap<i64, u64>,
}

impl LinearCounts {
    pub fn new(width: f64) -> Result<Self> {
        if !(width > 0.0 && width.is_finite()) {
            return Err(Error::InvalidArgument(format!("bin width {width} must be positive")));
        }
        Ok(LinearCounts {
            width,
            counts: BTreeMap::new(),
        })
    }

    pub fn add(&mut self, x: f64) {
        let k = (x / self.width).floor() as i64;
        *self.counts.entry(k).or_insert(0) += 1;
    }

    pub fn merge(&mut self, other: &LinearCounts) {
        assert_eq!(self.width, other.width, "merging histograms with different widths");
        for (&k, &c) in &other.counts {
            *self.counts.entry(k).or_insert(0) += c;
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Contiguous bins from the lowest to the highest occupied one.
    pub fn histogram(&self) -> Histogram {
        let binning = Binning::Linear { width: self.width };
        let total = self.total();
        let (Some((&lo, _)), Some((&hi, _))) = (self.counts.first_key_value(), self.counts.last_key_value()) else {
            return Histogram::empty(binning);
        };
        let bins = (lo..=hi)
            .map(|k| {
                let c = self.counts.get(&k).copied().unwrap_or(0);
                Bin {
                    left: k as f64 * self.width,
                    right: (k + 1) as f64 * self.width,
                    density: c as f64 / (total as f64 * self.width),
                }
            })
            .collect();
        Histogram {
            binning,
            bins,
            sample_count: total,
        }
    }
}

pub fn linear_histogram(samples: &[f64], width: f64) -> Result<Histogram> {
    let mut acc = LinearCounts::new(width)?;
    samples.iter().for_each(|&x| acc.add(x));
    Ok(acc.histogram())
}

/// Counts on geometric bins `[x0 * factor^k, x0 * factor^(k+1))`, plus a
/// dedicated `[0, x0)` bin for zero samples.
#[derive(Clone, Debug, PartialEq)]
pub struct LogCounts {
    x0: f64,
    factor: f64,
    zeros: u64,
    counts: BTreeMap<i32, u64>,
}

impl LogCounts {
    pub fn new(x0: f64, factor: f64) -> Result<Self> {
        if !(factor > 1.0 && factor.is_finite()) {
            return Err(Error::InvalidArgument(format!("log-bin factor {factor} must exceed 1")));
        }
        if !(x0 > 0.0 && x0.is_finite()) {
            return Err(Error::InvalidArgument(format!("log-bin origin {x0} must be positive")));
        }
        Ok(LogCounts {
            x0,
            factor,
            zeros: 0,
            counts: BTreeMap::new(),
        })
    }

    fn edge(&self, k: i32) -> f64 {
        self.x0 * self.factor.powi(k)
    }

    fn bin_of(&self, x: f64) -> i32 {
        let mut k = ((x / self.x0).ln() / self.factor.ln()).floor() as i32;
        // correct floating-point drift at bin edges
        while self.edge(k) > x {
            k -= 1;
        }
        while self.edge(k + 1) <= x {
            k += 1;
        }
        k
    }

    pub fn add(&mut self, x: f64) -> Result<()> {
        if x == 0.0 {
            self.zeros += 1;
        } else if x > 0.0 && x.is_finite() {
            let k = self.bin_of(x);
            *self.counts.entry(k).or_insert(0) += 1;
        } else {
            return Err(Error::InvalidArgument(format!(
                "log-binned sample {x} is negative or not finite"
            )));
        }
        Ok(())
    }

    pub fn merge(&mut self, other: &LogCounts) {
        assert!(
            self.x0 == other.x0 && self.factor == other.factor,
            "merging log histograms with different bin edges"
        );
        self.zeros += other.zeros;
        for (&k, &c) in &other.counts {
            *self.counts.entry(k).or_insert(0) += c;
        }
    }

    pub fn total(&self) -> u64 {
        self.zeros + self.counts.values().sum::<u64>()
    }

    pub fn histogram(&self) -> Histogram {
        let binning = Binning::Logarithmic { factor: self.factor };
        let total = self.total();
        if total == 0 {
            return Histogram::empty(binning);
        }
        let n = total as f64;
        let mut bins = Vec::new();
        let lo = self.counts.first_key_value().map(|(&k, _)| k);
        if self.zeros > 0 {
            let right = lo.map_or(self.x0, |k| self.edge(k.min(0)));
            bins.push(Bin {
                left: 0.0,
                right,
                density: self.zeros as f64 / (n * right),
            });
            if let Some(lo) = lo {
                // keep bins contiguous between the zero bin and the first occupied one
                for k in lo.min(0)..lo {
                    bins.push(Bin {
                        left: self.edge(k),
                        right: self.edge(k + 1),
                        density: 0.0,
                    });
                }
            }
        }
        if let (Some(lo), Some((&hi, _))) = (lo, self.counts.last_key_value()) {
            for k in lo..=hi {
                let (left, right) = (self.edge(k), self.edge(k + 1));
                let c = self.counts.get(&k).copied().unwrap_or(0);
                bins.push(Bin {
                    left,
                    right,
                    density: c as f64 / (n * (right - left)),
                });
            }
        }
        Histogram {
            binning,
            bins,
            sample_count: total,
        }
    }
}

/// Log-binned density with bins anchored at the smallest positive sample.
pub fn log_binned_pdf(samples: &[f64], factor: f64) -> Result<Histogram> {
    if samples.is_empty() {
        return Err(Error::NotEnoughSamples { needed: 1, got: 0 });
    }
    let x0 = samples
        .iter()
        .copied()
        .filter(|&x| x > 0.0)
        .fold(f64::INFINITY, f64::min);
    let x0 = if x0.is_finite() { x0 } else { 1.0 };
    let mut acc = LogCounts::new(x0, factor)?;
    for &x in samples {
        acc.add(x)?;
    }
    Ok(acc.histogram())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub average: f64,
    pub standard_deviation: f64,
    /// `standard_deviation / average`
    pub dispersion_ratio: f64,
    pub count: u64,
}

/// Population mean, population standard deviation and their ratio.
pub fn summary(samples: &[f64]) -> Result<SummaryStats> {
    if samples.len() < 2 {
        return Err(Error::NotEnoughSamples {
            needed: 2,
            got: samples.len(),
        });
    }
    let n = samples.len() as f64;
    let average = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - average).powi(2)).sum::<f64>() / n;
    let standard_deviation = var.sqrt();
    let dispersion_ratio = if standard_deviation == 0.0 {
        0.0
    } else {
        standard_deviation / average
    };
    Ok(SummaryStats {
        average,
        standard_deviation,
        dispersion_ratio,
        count: samples.len() as u64,
    })
}

/// Percentile of sorted data with linear interpolation between order
/// statistics at position `p * (n - 1)`.
pub fn percentile(sorted: &[f64], p: f64) -> Option<f64> {
    if sorted.is_empty() {
        return None;
    }
    let pos = p.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    Some(sorted[lo] + (sorted[hi] - sorted[lo]) * frac)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxStats {
    pub level: u32,
    pub median: f64,
    pub q25: f64,
    pub q75: f64,
    pub whisker_low: f64,
    pub whisker_high: f64,
    pub outliers: Vec<f64>,
}

impl BoxStats {
    pub fn from_samples(level: u32, samples: &[f64]) -> Option<BoxStats> {
        let mut v = samples.to_vec();
        v.sort_by(f64::total_cmp);
        let whisker_low = percentile(&v, 0.10)?;
        let whisker_high = percentile(&v, 0.90)?;
        Some(BoxStats {
            level,
            median: percentile(&v, 0.5)?,
            q25: percentile(&v, 0.25)?,
            q75: percentile(&v, 0.75)?,
            whisker_low,
            whisker_high,
            outliers: v.into_iter().filter(|&x| x < whisker_low || x > whisker_high).collect(),
        })
    }
}

/// Box statistics of the number of nodes per tree level.
///
/// Every tree contributes one sample to every level up to the deepest level
/// seen in any tree; a tree that does not reach level `l` contributes 0.
pub fn level_boxplot<'a, I>(level_counts: I) -> Vec<BoxStats>
where
    I: IntoIterator<Item = &'a BTreeMap<u32, usize>>,
{
    let per_tree: Vec<&BTreeMap<u32, usize>> = level_counts.into_iter().collect();
    let depth = per_tree.iter().filter_map(|m| m.keys().next_back().copied()).max();
    let Some(depth) = depth else {
        return Vec::new();
    };
    (0..=depth)
        .filter_map(|l| {
            let samples: Vec<f64> = per_tree
                .iter()
                .map(|m| m.get(&l).copied().unwrap_or(0) as f64)
                .collect();
            BoxStats::from_samples(l, &samples)
        })
        .collect()
}

pub fn tree_level_boxplot(trees: &[FastestRouteTree]) -> Vec<BoxStats> {
    let counts: Vec<_> = trees.iter().map(FastestRouteTree::level_counts).collect();
    level_boxplot(&counts)
}

/// Per-node running sums of out-degree over the trees the node appears in.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DegreeAverages {
    sums: BTreeMap<NodeId, (u64, u64)>,
}

impl DegreeAverages {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_tree(&mut self, out_degrees: &BTreeMap<NodeId, usize>) {
        for (&n, &d) in out_degrees {
            let e = self.sums.entry(n).or_insert((0, 0));
            e.0 += d as u64;
            e.1 += 1;
        }
    }

    pub fn merge(&mut self, other: &DegreeAverages) {
        for (&n, &(s, c)) in &other.sums {
            let e = self.sums.entry(n).or_insert((0, 0));
            e.0 += s;
            e.1 += c;
        }
    }

    /// Average out-degree per node over the trees containing it.
    pub fn averages(&self) -> BTreeMap<NodeId, f64> {
        self.sums.iter().map(|(&n, &(s, c))| (n, s as f64 / c as f64)).collect()
    }

    pub fn density(&self, bin_width: f64) -> Result<Histogram> {
        let avgs: Vec<f64> = self.averages().into_values().collect();
        linear_histogram(&avgs, bin_width)
    }
}

/// Density of per-node average out-degree over a collection of trees.
pub fn avg_out_degree_density(trees: &[FastestRouteTree], bin_width: f64) -> Result<Histogram> {
    let mut acc = DegreeAverages::new();
    for t in trees {
        acc.add_tree(&t.out_degrees());
    }
    acc.density(bin_width)
}

/// Wall-clock arrival times (seconds) of every node at `level`, pooled over trees.
pub fn level_arrival_times(trees: &[FastestRouteTree], level: u32, delta_t: u64) -> Vec<u64> {
    trees
        .iter()
        .flat_map(|t| t.entries.values())
        .filter(|e| e.level == level)
        .map(|e| e.arrival.start_secs(delta_t))
        .collect()
}

fn windowed(times: impl Iterator<Item = u64>, half_window: u64, delta_t: u64, timeline_secs: u64) -> Result<Histogram> {
    if half_window == 0 || !half_window.is_multiple_of(delta_t) {
        return Err(Error::InvalidArgument(format!(
            "window {half_window}s is not a positive multiple of delta_t {delta_t}s"
        )));
    }
    let width = 2 * half_window;
    let mut counts = vec![0u64; timeline_secs.div_ceil(width) as usize];
    let mut total = 0u64;
    for t in times {
        let k = (t / width) as usize;
        if k >= counts.len() {
            counts.resize(k + 1, 0);
        }
        counts[k] += 1;
        total += 1;
    }
    let binning = Binning::Linear { width: width as f64 };
    if total == 0 {
        return Ok(Histogram::empty(binning));
    }
    let bins = counts
        .iter()
        .enumerate()
        .map(|(k, &c)| Bin {
            left: (k as u64 * width) as f64,
            right: ((k as u64 + 1) * width) as f64,
            density: c as f64 / (total as f64 * width as f64),
        })
        .collect();
    Ok(Histogram {
        binning,
        bins,
        sample_count: total,
    })
}

/// Probability that an arrival falls in `[t - half_window, t + half_window)`
/// for window centres `t = (2k + 1) * half_window` tiling the timeline.
/// Bin mass is that probability.
pub fn arrival_histogram(
    arrival_secs: &[u64],
    half_window: u64,
    delta_t: u64,
    timeline_secs: u64,
) -> Result<Histogram> {
    windowed(arrival_secs.iter().copied(), half_window, delta_t, timeline_secs)
}

/// Companion series of [`arrival_histogram`] over all edge-frame contacts.
pub fn contact_histogram(g: &TemporalContactGraph, half_window: u64) -> Result<Histogram> {
    let dt = g.delta_t();
    let times = g
        .frames()
        .flat_map(move |(f, fr)| std::iter::repeat_n(f.start_secs(dt), fr.len()));
    windowed(times, half_window, dt, g.frame_count() as u64 * dt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{parse_contact_stream, FrameIndex, ParseOptions};
    use crate::spread::{sweep, PropagationMode, SweepSpec};

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()))
    }

    #[test]
    fn summary_basics() {
        let s = summary(&[1.0, 3.0]).unwrap();
        assert_eq!((s.average, s.standard_deviation, s.dispersion_ratio), (2.0, 1.0, 0.5));
        let c = summary(&[4.0; 7]).unwrap();
        assert_eq!((c.standard_deviation, c.dispersion_ratio), (0.0, 0.0));
        assert_eq!(summary(&[1.0]), Err(Error::NotEnoughSamples { needed: 2, got: 1 }));
    }

    #[test]
    fn percentiles_interpolate() {
        let v = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(percentile(&v, 0.5), Some(3.0));
        assert_eq!(percentile(&v, 0.25), Some(2.0));
        assert_eq!(percentile(&v, 0.75), Some(4.0));
        assert_eq!(percentile(&v, 0.10), Some(1.4));
        assert_eq!(percentile(&[], 0.5), None);
    }

    #[test]
    fn box_of_one_to_five() {
        let b = BoxStats::from_samples(2, &[5.0, 3.0, 1.0, 4.0, 2.0]).unwrap();
        assert_eq!((b.q25, b.median, b.q75), (2.0, 3.0, 4.0));
        assert_eq!(b.outliers, vec![1.0, 5.0]);
    }

    #[test]
    fn identical_trees_zero_width_boxes() {
        let m = BTreeMap::from([(0u32, 1usize), (1, 3), (2, 2)]);
        let boxes = level_boxplot(vec![&m, &m, &m]);
        assert_eq!(boxes.len(), 3);
        for b in boxes {
            assert_eq!(b.q25, b.q75);
            assert_eq!(b.whisker_low, b.whisker_high);
            assert!(b.outliers.is_empty());
        }
    }

    #[test]
    fn single_sample_log_bin() {
        let h = log_binned_pdf(&[8.0], 1.25).unwrap();
        assert_eq!(h.bins.len(), 1);
        assert!(close(h.bins[0].density, 1.0 / (8.0 * 0.25)));
        assert!(close(h.total_mass(), 1.0));
    }

    #[test]
    fn uniform_in_one_wide_bin() {
        let samples: Vec<f64> = (0..=1000).map(|i| 1.0 + i as f64 / 1000.0).collect();
        let h = log_binned_pdf(&samples, 2.0 + 1e-9).unwrap();
        assert_eq!(h.bins.len(), 1);
        assert!((h.bins[0].density - 1.0).abs() < 1e-6);
    }

    #[test]
    fn zeros_get_their_own_bin() {
        let h = log_binned_pdf(&[0.0, 0.0, 2.0, 3.0], 1.25).unwrap();
        assert_eq!(h.bins[0].left, 0.0);
        assert_eq!(h.bins[0].right, 2.0);
        assert!(close(h.bins[0].mass(), 0.5));
        assert!(close(h.total_mass(), 1.0));
        for w in h.bins.windows(2) {
            assert_eq!(w[0].right, w[1].left);
        }
        assert!(log_binned_pdf(&[], 1.25).is_err());
        assert!(log_binned_pdf(&[1.0], 1.0).is_err());
        assert!(log_binned_pdf(&[-1.0], 2.0).is_err());
    }

    #[test]
    fn log_bin_edges_are_exact_powers() {
        let mut acc = LogCounts::new(1.0, 2.0).unwrap();
        for x in [1.0, 2.0, 4.0, 3.999] {
            acc.add(x).unwrap();
        }
        let h = acc.histogram();
        let masses: Vec<f64> = h.bins.iter().map(|b| b.mass() * 4.0).collect();
        assert_eq!(h.bins.iter().map(|b| b.left).collect::<Vec<_>>(), [1.0, 2.0, 4.0]);
        assert!(masses.iter().zip([1.0, 2.0, 1.0]).all(|(a, b)| close(*a, b)));
    }

    #[test]
    fn merged_counts_equal_single_pass() {
        let xs: Vec<f64> = (1..200).map(|i| (i as f64).powf(1.3)).collect();
        let mut whole = LogCounts::new(1.0, 1.25).unwrap();
        let mut left = LogCounts::new(1.0, 1.25).unwrap();
        let mut right = LogCounts::new(1.0, 1.25).unwrap();
        for (i, &x) in xs.iter().enumerate() {
            whole.add(x).unwrap();
            if i % 3 == 0 {
                left.add(x).unwrap()
            } else {
                right.add(x).unwrap()
            }
        }
        right.merge(&left);
        assert_eq!(right, whole);

        let mut a = LinearCounts::new(0.5).unwrap();
        let mut b = LinearCounts::new(0.5).unwrap();
        a.add(0.1);
        b.add(3.2);
        let mut ab = a.clone();
        ab.merge(&b);
        let mut ba = b.clone();
        ba.merge(&a);
        assert_eq!(ab, ba);
        assert_eq!(ab.histogram().bins.len(), 7);
    }

    #[test]
    fn star_sweep_degree_averages() {
        // every tree is a star from node 0 over the 3 others
        let g = crate::graph::TemporalContactGraph::from_frames(20, 4, &[vec![(0, 1), (0, 2), (0, 3)]]).unwrap();
        let spec = SweepSpec {
            injection_frames: vec![FrameIndex(0); 4],
            roots: vec![NodeId(0)],
            mode: PropagationMode::OneHopPerFrame,
            tie_break: Default::default(),
        };
        let trees = sweep(&g, &spec).unwrap();
        let mut acc = DegreeAverages::new();
        trees.iter().for_each(|t| acc.add_tree(&t.out_degrees()));
        let avgs = acc.averages();
        assert_eq!(avgs[&NodeId(0)], 3.0);
        assert!((1..4).all(|i| avgs[&NodeId(i)] == 0.0));
        let h = acc.density(0.25).unwrap();
        assert!(close(h.total_mass(), 1.0));
        assert!(close(h.bins[0].mass(), 0.75));
    }

    #[test]
    fn toy_degree_averages() {
        // roots A, B, C at t0 = 0, one hop per frame:
        //   root A: A->B              degrees A1 B0
        //   root B: B->A, B->C        degrees B2 A0 C0
        //   root C: C->B, B->A (f1)   degrees C1 B1 A0
        let g = parse_contact_stream(["0 A B", "0 B C", "20 A B"], ParseOptions::new(20)).unwrap();
        let spec = SweepSpec::all_roots(&g, vec![FrameIndex(0)], PropagationMode::OneHopPerFrame);
        let trees = sweep(&g, &spec).unwrap();
        let mut acc = DegreeAverages::new();
        trees.iter().for_each(|t| acc.add_tree(&t.out_degrees()));
        let avgs = acc.averages();
        assert!(close(avgs[&NodeId(0)], 1.0 / 3.0));
        assert!(close(avgs[&NodeId(1)], 3.0 / 3.0));
        assert!(close(avgs[&NodeId(2)], 1.0 / 2.0));

        let boxes = tree_level_boxplot(&trees);
        assert_eq!(boxes.len(), 3);
        assert_eq!(boxes[0].median, 1.0);
        // level 1 counts pooled: {1, 2, 1}
        assert_eq!(boxes[1].median, 1.0);
        assert_eq!(boxes[1].q75, 1.5);
        // level 2: {0, 0, 1}
        assert_eq!(boxes[2].median, 0.0);
        assert_eq!(boxes[2].whisker_high, 0.8);
    }

    #[test]
    fn arrival_windows() {
        // one instant
        let h = arrival_histogram(&[600, 600, 600], 300, 20, 3600).unwrap();
        let masses: Vec<f64> = h.bins.iter().map(Bin::mass).collect();
        assert!(close(masses[1], 1.0));
        assert_eq!(masses.iter().filter(|&&m| m > 0.0).count(), 1);

        // two arrivals 4 half-windows apart
        let h = arrival_histogram(&[100, 100 + 4 * 300], 300, 20, 3600).unwrap();
        let bumps: Vec<f64> = h.bins.iter().map(Bin::mass).filter(|&m| m > 0.0).collect();
        assert_eq!(bumps.len(), 2);
        assert!(bumps.iter().all(|&m| close(m, 0.5)));

        assert!(arrival_histogram(&[], 300, 20, 3600).unwrap().is_empty());
        assert!(arrival_histogram(&[0], 30, 20, 3600).is_err());
    }

    #[test]
    fn toy_level_one_arrivals() {
        let g = parse_contact_stream(["0 A B", "0 B C", "20 A B"], ParseOptions::new(20)).unwrap();
        let spec = SweepSpec::all_roots(&g, vec![FrameIndex(0)], PropagationMode::OneHopPerFrame);
        let trees = sweep(&g, &spec).unwrap();
        let times = level_arrival_times(&trees, 1, 20);
        assert_eq!(times, [0, 0, 0, 0]);
        let h = arrival_histogram(&times, 20, 20, 40).unwrap();
        assert!(close(h.bins[0].mass(), 1.0));
        assert_eq!(h.bins[0].left, 0.0);

        let c = contact_histogram(&g, 20).unwrap();
        assert_eq!(c.sample_count, 3);
        assert!(close(c.bins[0].mass(), 1.0));
    }

    #[test]
    fn mode_bin() {
        let h = linear_histogram(&[0.95, 0.97, 0.99, 1.3, 0.2], 0.1).unwrap();
        let m = h.mode().unwrap();
        assert!((m.center() - 0.95).abs() < 1e-9);
    }
}
