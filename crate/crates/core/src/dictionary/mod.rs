//! Symbol dictionaries over sparse transmit arrays.
//!
//! A codeword binds a bit index to the post-rotation steering vector of a
//! K-antenna subset (optionally reordered by a waveform-antenna permutation).
//! Builders: exhaustive subarray enumeration, greedy max-min distance
//! selection, beampattern-ripple ranking, permutation augmentation, and the
//! regularized two-antennas-per-subgroup scheme. Dictionaries serialize to a
//! versioned JSON document and reload bit-exactly.

mod scp;

pub use scp::{scp_comm_select, scp_radar_select, ScpOptions};

use crate::array::{PermutationMatrix, Subarray};
use crate::error::{Error, Result};
use crate::exec;
use crate::pattern::{
    design_minimax_weights, worst_sidelobe_db, PatternGrid, PhaseProfile,
};
use crate::{array, ArrayGeometry, ReceiveArray};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Distance comparisons treat values within this of each other as tied and
/// fall back to lexicographic order, keeping builds deterministic.
pub(crate) const TIE_EPS: f64 = 1e-9;

/// Design margin applied to the sidelobe constraint during ripple ranking so
/// that the selected patterns still clear the requirement after normalizing
/// to the realized mainlobe peak on the fine reporting grid.
const SIDELOBE_DESIGN_MARGIN: f64 = 0.85;

/// Achieved ripples closer than this are not resolved by the first-order
/// weight designer (its level-set convergence slack is of the same order), so
/// the ranking treats them as tied and orders tied subarrays
/// lexicographically.
pub const RIPPLE_RANK_RESOLUTION: f64 = 1e-2;

/// Ranking key for an achieved ripple at [`RIPPLE_RANK_RESOLUTION`].
pub fn ripple_rank_key(rho: f64) -> i64 {
    (rho / RIPPLE_RANK_RESOLUTION).floor() as i64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Selection,
    Hybrid,
    Regularized,
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Scheme::Selection => write!(f, "selection"),
            Scheme::Hybrid => write!(f, "hybrid"),
            Scheme::Regularized => write!(f, "regularized"),
        }
    }
}

/// One dictionary symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct Codeword {
    pub sub: Subarray,
    pub perm: Option<PermutationMatrix>,
    pub vector: Vec<Complex64>,
    pub bit_index: usize,
}

impl Codeword {
    /// Selection-scheme codeword: the rotated symbol of the subset.
    pub fn selection(sub: Subarray, m: usize, bit_index: usize) -> Result<Self> {
        let vector = array::rotated_symbol(&sub, m)?.into_vec();
        Ok(Self {
            sub,
            perm: None,
            vector,
            bit_index,
        })
    }

    /// Hybrid-scheme codeword: a permutation applied to the rotated symbol.
    pub fn permuted(
        sub: Subarray,
        perm: PermutationMatrix,
        m: usize,
        bit_index: usize,
    ) -> Result<Self> {
        let base = array::rotated_symbol(&sub, m)?.into_vec();
        let vector = perm.apply(&base)?;
        Ok(Self {
            sub,
            perm: Some(perm),
            vector,
            bit_index,
        })
    }

    pub fn k(&self) -> usize {
        self.vector.len()
    }
}

/// A complete symbol set of size `2^Nb`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolDictionary {
    scheme: Scheme,
    m: usize,
    k: usize,
    nb: u32,
    entries: Vec<Codeword>,
}

/// Per-symbol extreme squared distances and the global extremes.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceStats {
    pub per_symbol_min: Vec<f64>,
    pub per_symbol_max: Vec<f64>,
    pub global_min: f64,
    pub global_max: f64,
}

pub fn squared_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum()
}

impl SymbolDictionary {
    fn from_entries(scheme: Scheme, m: usize, k: usize, entries: Vec<Codeword>) -> Result<Self> {
        let len = entries.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(len));
        }
        for (i, e) in entries.iter().enumerate() {
            if e.bit_index != i {
                return Err(Error::DictionaryFormat(format!(
                    "bit_index {} at position {i}",
                    e.bit_index
                )));
            }
            if e.vector.len() != k {
                return Err(Error::LengthMismatch {
                    expected: k,
                    got: e.vector.len(),
                });
            }
        }
        Ok(Self {
            scheme,
            m,
            k,
            nb: len.trailing_zeros(),
            entries,
        })
    }

    /// Crate-internal constructor for derived dictionaries (sub-rates and the
    /// like); performs the same validation as the public builders.
    pub(crate) fn from_parts(
        scheme: Scheme,
        m: usize,
        k: usize,
        entries: Vec<Codeword>,
    ) -> Result<Self> {
        Self::from_entries(scheme, m, k, entries)
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Bits per symbol carried by this dictionary (log2 of its size).
    pub fn nb(&self) -> u32 {
        self.nb
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Codeword] {
        &self.entries
    }

    pub fn entry(&self, bit_index: usize) -> Result<&Codeword> {
        self.entries
            .get(bit_index)
            .ok_or(Error::IndexOutsideDictionary {
                index: bit_index,
                size: self.entries.len(),
            })
    }

    /// Smallest pairwise squared distance.
    pub fn min_distance_sq(&self) -> Result<f64> {
        Ok(distance_stats(self)?.global_min)
    }

    /// The first `size` entries as a sub-rate dictionary. Dictionary order is
    /// the priority order of its builder, so this keeps the max-min prefix of
    /// a greedy dictionary and the smallest-ripple subarrays of a ranked one.
    pub fn prefix(&self, size: usize) -> Result<Self> {
        if size > self.entries.len() {
            return Err(Error::DictionaryTooLarge {
                requested: size as u128,
                available: self.entries.len() as u128,
            });
        }
        Self::from_entries(
            self.scheme,
            self.m,
            self.k,
            self.entries[..size].to_vec(),
        )
    }
}

/// Capacity in bits per symbol: `floor(log2 C(M,K))` for selection,
/// `floor(log2(C(M,K) * K!))` for hybrid, `K` for regularized.
pub fn bits_per_symbol_value(scheme: Scheme, m: usize, k: usize) -> Result<u32> {
    match scheme {
        Scheme::Selection => Ok(subarray_count(m, k)?.ilog2()),
        Scheme::Hybrid => {
            // C(M,K) * K! is the falling factorial M (M-1) ... (M-K+1)
            let mut acc: u128 = 1;
            for i in 0..k {
                acc = acc.checked_mul((m - i) as u128).ok_or_else(|| {
                    Error::InvalidParameter(format!(
                        "hybrid capacity overflows for M={m}, K={k}"
                    ))
                })?;
            }
            Ok(acc.ilog2())
        }
        Scheme::Regularized => {
            if k == 0 {
                return Err(Error::SubsetTooLarge { k, m });
            }
            Ok(k as u32)
        }
    }
}

/// Exact binomial coefficient C(m, k).
pub fn subarray_count(m: usize, k: usize) -> Result<u128> {
    if k == 0 || k > m {
        return Err(Error::SubsetTooLarge { k, m });
    }
    let k = k.min(m - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (m - i) as u128 / (i + 1) as u128;
    }
    Ok(acc)
}

/// Lazy lexicographic enumeration of all K-subsets of `{0..M-1}`.
pub fn enumerate_subarrays(m: usize, k: usize) -> Result<SubarrayIter> {
    if k == 0 || k > m {
        return Err(Error::SubsetTooLarge { k, m });
    }
    Ok(SubarrayIter {
        m,
        next: Some((0..k).collect()),
    })
}

pub struct SubarrayIter {
    m: usize,
    next: Option<Vec<usize>>,
}

impl Iterator for SubarrayIter {
    type Item = Subarray;

    fn next(&mut self) -> Option<Subarray> {
        let current = self.next.take()?;
        let k = current.len();
        let mut succ = current.clone();
        // rightmost index that can still advance
        let mut i = k;
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            if succ[i] < self.m - (k - i) {
                succ[i] += 1;
                for j in i + 1..k {
                    succ[j] = succ[j - 1] + 1;
                }
                self.next = Some(succ);
                break;
            }
        }
        Some(Subarray::new(current).expect("iterator yields valid subsets"))
    }
}

/// The two rotated symbols at the largest possible squared distance `4K`:
/// index blocks `{0..K-1}` and `{M/2..M/2+K-1}`, whose entries are antipodal
/// pair by pair.
pub fn analytic_extreme_pair(m: usize, k: usize) -> Result<(Codeword, Codeword)> {
    if m % 2 != 0 || k > m / 2 || k == 0 {
        return Err(Error::NoAnalyticPair { m, k });
    }
    let first = Subarray::new((0..k).collect())?;
    let second = Subarray::new((m / 2..m / 2 + k).collect())?;
    Ok((
        Codeword::selection(first, m, 0)?,
        Codeword::selection(second, m, 1)?,
    ))
}

/// Squared distance between two subsets' rotated symbols, from the index
/// multisets alone: `sum_k 2 - 2 cos(2 pi (a_k - b_k) / M)`.
fn subset_distance_sq(a: &Subarray, b: &Subarray, table: &[f64]) -> f64 {
    let m = table.len();
    a.indices()
        .iter()
        .zip(b.indices())
        .map(|(&x, &y)| table[(x + m - y) % m])
        .sum()
}

fn entry_distance_table(m: usize) -> Vec<f64> {
    (0..m)
        .map(|d| {
            let c = (std::f64::consts::TAU * d as f64 / m as f64).cos();
            2.0 - 2.0 * c
        })
        .collect()
}

/// Greedy max-min dictionary: seeded with the analytic extreme pair, then
/// repeatedly adds the candidate subset whose minimum squared distance to the
/// chosen set is largest. Ties go to the lexicographically smallest subset.
pub fn greedy_maxmin_dictionary(m: usize, k: usize, size: usize) -> Result<SymbolDictionary> {
    let total = subarray_count(m, k)?;
    if size < 2 || !size.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(size));
    }
    if size as u128 > total {
        return Err(Error::DictionaryTooLarge {
            requested: size as u128,
            available: total,
        });
    }
    let (first, second) = analytic_extreme_pair(m, k)?;
    let table = entry_distance_table(m);
    let candidates: Vec<Subarray> = enumerate_subarrays(m, k)?.collect();
    debug_assert_eq!(candidates.len() as u128, total);

    let mut chosen: Vec<Subarray> = vec![first.sub.clone(), second.sub.clone()];
    let mut min_dist: Vec<f64> = candidates
        .iter()
        .map(|c| {
            subset_distance_sq(c, &chosen[0], &table).min(subset_distance_sq(c, &chosen[1], &table))
        })
        .collect();
    for seed in &chosen {
        let pos = candidates
            .binary_search(seed)
            .expect("seed subsets are valid candidates");
        min_dist[pos] = -1.0;
    }

    while chosen.len() < size {
        let mut best = usize::MAX;
        let mut best_score = -1.0;
        for (i, &s) in min_dist.iter().enumerate() {
            if s > best_score + TIE_EPS {
                best = i;
                best_score = s;
            }
        }
        let picked = candidates[best].clone();
        min_dist[best] = -1.0;
        for (i, s) in min_dist.iter_mut().enumerate() {
            if *s >= 0.0 {
                *s = s.min(subset_distance_sq(&candidates[i], &picked, &table));
            }
        }
        chosen.push(picked);
    }

    let entries = chosen
        .into_iter()
        .enumerate()
        .map(|(i, sub)| Codeword::selection(sub, m, i))
        .collect::<Result<Vec<_>>>()?;
    SymbolDictionary::from_entries(Scheme::Selection, m, k, entries)
}

/// For each codeword of a selection dictionary, in order, enumerates all K!
/// arrangements of its vector and keeps the one maximizing the minimum
/// distance to the already-kept codewords. Ties go to the lexicographically
/// smallest arrangement, so the first codeword keeps the identity.
pub fn permute_augment(base: &SymbolDictionary) -> Result<SymbolDictionary> {
    if base.scheme() != Scheme::Selection {
        return Err(Error::SchemeMismatch {
            expected: Scheme::Selection.to_string(),
            got: base.scheme().to_string(),
        });
    }
    let k = base.k();
    if k > 10 {
        return Err(Error::PermutationSpaceTooLarge(k));
    }
    let mut kept: Vec<Codeword> = Vec::with_capacity(base.len());
    for (ci, cw) in base.entries().iter().enumerate() {
        if kept.is_empty() {
            kept.push(Codeword::permuted(
                cw.sub.clone(),
                PermutationMatrix::identity(k),
                base.m(),
                0,
            )?);
            continue;
        }
        let v = &cw.vector;
        let np = kept.len();
        // cost[p][slot][elem] = |kept_p[slot] - v[elem]|^2
        let mut cost = vec![0.0f64; np * k * k];
        for (p, prior) in kept.iter().enumerate() {
            for slot in 0..k {
                for elem in 0..k {
                    cost[(p * k + slot) * k + elem] = (prior.vector[slot] - v[elem]).norm_sqr();
                }
            }
        }
        let mut sigma: Vec<usize> = (0..k).collect();
        let mut sums: Vec<f64> = (0..np)
            .map(|p| (0..k).map(|s| cost[(p * k + s) * k + sigma[s]]).sum())
            .collect();
        let score_of = |sums: &[f64]| sums.iter().cloned().fold(f64::INFINITY, f64::min);
        let mut best_sigma = sigma.clone();
        let mut best_score = score_of(&sums);

        // Heap's algorithm: one transposition per step, sums updated in O(np)
        let mut ctr = vec![0usize; k];
        let mut i = 0;
        while i < k {
            if ctr[i] < i {
                let (a, b) = if i % 2 == 0 { (0, i) } else { (ctr[i], i) };
                for p in 0..np {
                    let row_a = (p * k + a) * k;
                    let row_b = (p * k + b) * k;
                    sums[p] += cost[row_a + sigma[b]] + cost[row_b + sigma[a]]
                        - cost[row_a + sigma[a]]
                        - cost[row_b + sigma[b]];
                }
                sigma.swap(a, b);
                let s = score_of(&sums);
                if s > best_score + TIE_EPS
                    || ((s - best_score).abs() <= TIE_EPS && sigma < best_sigma)
                {
                    best_score = s;
                    best_sigma = sigma.clone();
                }
                ctr[i] += 1;
                i = 0;
            } else {
                ctr[i] = 0;
                i += 1;
            }
        }
        kept.push(Codeword::permuted(
            cw.sub.clone(),
            PermutationMatrix::new(best_sigma)?,
            base.m(),
            ci,
        )?);
    }
    SymbolDictionary::from_entries(Scheme::Hybrid, base.m(), k, kept)
}

/// Regularized dictionary: `M = 2K` antennas in K two-antenna subgroups, one
/// bit per subgroup. Bit 0 keeps the first antenna of the subgroup with total
/// phase 0, bit 1 the second with total phase pi, so vectors live in
/// `{+1, -1}^K`. Subgroup j carries block bit j (most significant first).
pub fn build_regularized_dictionary(k: usize) -> Result<SymbolDictionary> {
    if k == 0 || k > 20 {
        return Err(Error::InvalidParameter(format!(
            "regularized subgroup count {k} out of supported range 1..=20"
        )));
    }
    let m = 2 * k;
    let size = 1usize << k;
    let mut entries = Vec::with_capacity(size);
    for idx in 0..size {
        let mut indices = Vec::with_capacity(k);
        let mut vector = Vec::with_capacity(k);
        for j in 0..k {
            let bit = (idx >> (k - 1 - j)) & 1;
            indices.push(2 * j + bit);
            vector.push(Complex64::new(if bit == 0 { 1.0 } else { -1.0 }, 0.0));
        }
        entries.push(Codeword {
            sub: Subarray::new(indices)?,
            perm: None,
            vector,
            bit_index: idx,
        });
    }
    SymbolDictionary::from_entries(Scheme::Regularized, m, k, entries)
}

/// Ranks every candidate subarray by its achieved minimax mainlobe ripple and
/// keeps the best `size` whose re-verified sidelobe peak, normalized to the
/// mainlobe peak on the fine reporting grid, clears `sidelobe_eps`.
///
/// The inner designs are independent and run in parallel; candidates are
/// ranked by `(ripple, lexicographic subset)` after all designs finish, so the
/// result does not depend on the worker count.
pub fn build_radar_dictionary_by_enumeration(
    geometry: &ArrayGeometry,
    k: usize,
    size: usize,
    receive: &ReceiveArray,
    grid: &PatternGrid,
    sidelobe_eps: f64,
    threads: Option<usize>,
) -> Result<SymbolDictionary> {
    let m = geometry.num_antennas();
    let total = subarray_count(m, k)?;
    if size < 2 || !size.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(size));
    }
    if size as u128 > total {
        return Err(Error::DictionaryTooLarge {
            requested: size as u128,
            available: total,
        });
    }
    let candidates: Vec<Subarray> = enumerate_subarrays(m, k)?.collect();
    let report = PatternGrid::reporting((
        grid.sector().0.to_degrees(),
        grid.sector().1.to_degrees(),
    ))?;
    let level_db = 20.0 * sidelobe_eps.log10();
    let eps_design = sidelobe_eps * SIDELOBE_DESIGN_MARGIN;

    let ripples: Vec<Option<f64>> = exec::map_indexed(candidates.len(), threads, |i| {
        let sub = &candidates[i];
        match design_minimax_weights(sub, geometry, receive, grid, eps_design, PhaseProfile::default())
        {
            Ok((w, rho)) => {
                let worst = worst_sidelobe_db(&w, sub, geometry, receive, &report).ok()?;
                (worst <= level_db + 1e-9).then_some(rho)
            }
            Err(_) => None,
        }
    });

    let mut ranked: Vec<(f64, usize)> = ripples
        .iter()
        .enumerate()
        .filter_map(|(i, r)| r.map(|rho| (rho, i)))
        .collect();
    if ranked.len() < size {
        return Err(Error::NotEnoughFeasibleSubarrays {
            requested: size,
            passed: ranked.len(),
        });
    }
    // candidate index is the lexicographic rank, so it breaks ties between
    // ripples the solver cannot distinguish
    ranked.sort_by(|a, b| {
        ripple_rank_key(a.0)
            .cmp(&ripple_rank_key(b.0))
            .then(a.1.cmp(&b.1))
    });

    let entries = ranked[..size]
        .iter()
        .enumerate()
        .map(|(rank, &(_, i))| Codeword::selection(candidates[i].clone(), m, rank))
        .collect::<Result<Vec<_>>>()?;
    SymbolDictionary::from_entries(Scheme::Selection, m, k, entries)
}

/// Greedy max-min reordering: picks the farthest pair first, then repeatedly
/// appends the entry maximizing the minimum distance to the prefix. Used to
/// carve well-spread sub-dictionaries of size `2^b` out of a full dictionary.
pub fn maxmin_reorder(dict: &SymbolDictionary, target_size: usize) -> Result<SymbolDictionary> {
    let n = dict.len();
    if target_size < 2 || !target_size.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(target_size));
    }
    if target_size > n {
        return Err(Error::DictionaryTooLarge {
            requested: target_size as u128,
            available: n as u128,
        });
    }
    let mut d = vec![0.0f64; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let dist = squared_distance(&dict.entries()[i].vector, &dict.entries()[j].vector);
            d[i * n + j] = dist;
            d[j * n + i] = dist;
        }
    }
    let (mut bi, mut bj, mut best) = (0usize, 1usize, -1.0f64);
    for i in 0..n {
        for j in i + 1..n {
            if d[i * n + j] > best + TIE_EPS {
                best = d[i * n + j];
                bi = i;
                bj = j;
            }
        }
    }
    let mut order = vec![bi, bj];
    let mut taken = vec![false; n];
    taken[bi] = true;
    taken[bj] = true;
    let mut min_dist: Vec<f64> = (0..n)
        .map(|i| d[i * n + bi].min(d[i * n + bj]))
        .collect();
    while order.len() < target_size {
        let mut pick = usize::MAX;
        let mut score = -1.0;
        for i in 0..n {
            if !taken[i] && min_dist[i] > score + TIE_EPS {
                pick = i;
                score = min_dist[i];
            }
        }
        taken[pick] = true;
        order.push(pick);
        for i in 0..n {
            if !taken[i] {
                min_dist[i] = min_dist[i].min(d[i * n + pick]);
            }
        }
    }
    let entries = order
        .iter()
        .enumerate()
        .map(|(rank, &i)| {
            let mut cw = dict.entries()[i].clone();
            cw.bit_index = rank;
            cw
        })
        .collect();
    SymbolDictionary::from_entries(dict.scheme(), dict.m(), dict.k(), entries)
}

/// Exact pairwise squared-distance statistics.
pub fn distance_stats(dict: &SymbolDictionary) -> Result<DistanceStats> {
    let n = dict.len();
    if n < 2 {
        return Err(Error::SingletonDictionary);
    }
    let mut per_min = vec![f64::INFINITY; n];
    let mut per_max = vec![0.0f64; n];
    for i in 0..n {
        for j in i + 1..n {
            let d = squared_distance(&dict.entries()[i].vector, &dict.entries()[j].vector);
            if d < per_min[i] {
                per_min[i] = d;
            }
            if d < per_min[j] {
                per_min[j] = d;
            }
            if d > per_max[i] {
                per_max[i] = d;
            }
            if d > per_max[j] {
                per_max[j] = d;
            }
        }
    }
    let global_min = per_min.iter().cloned().fold(f64::INFINITY, f64::min);
    let global_max = per_max.iter().cloned().fold(0.0, f64::max);
    Ok(DistanceStats {
        per_symbol_min: per_min,
        per_symbol_max: per_max,
        global_min,
        global_max,
    })
}

// ---------------------------------------------------------------------------
// JSON serialization
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct DictFile {
    version: u32,
    scheme: Scheme,
    #[serde(rename = "M")]
    m: usize,
    #[serde(rename = "K")]
    k: usize,
    #[serde(rename = "Nb")]
    nb: u32,
    entries: Vec<EntryFile>,
}

#[derive(Serialize, Deserialize)]
struct EntryFile {
    bit_index: usize,
    indices: Vec<usize>,
    perm: Option<Vec<usize>>,
    vector_re: Vec<f64>,
    vector_im: Vec<f64>,
}

pub const DICTIONARY_FORMAT_VERSION: u32 = 1;

impl SymbolDictionary {
    pub fn to_json(&self) -> Result<String> {
        let file = DictFile {
            version: DICTIONARY_FORMAT_VERSION,
            scheme: self.scheme,
            m: self.m,
            k: self.k,
            nb: self.nb,
            entries: self
                .entries
                .iter()
                .map(|e| EntryFile {
                    bit_index: e.bit_index,
                    indices: e.sub.indices().to_vec(),
                    perm: e.perm.as_ref().map(|p| p.mapping().to_vec()),
                    vector_re: e.vector.iter().map(|c| c.re).collect(),
                    vector_im: e.vector.iter().map(|c| c.im).collect(),
                })
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: DictFile = serde_json::from_str(text)?;
        if file.version != DICTIONARY_FORMAT_VERSION {
            return Err(Error::DictionaryFormat(format!(
                "unsupported version {}",
                file.version
            )));
        }
        let mut entries = Vec::with_capacity(file.entries.len());
        for e in file.entries {
            if e.vector_re.len() != file.k || e.vector_im.len() != file.k {
                return Err(Error::DictionaryFormat(
                    "vector length does not match K".into(),
                ));
            }
            let sub = Subarray::new(e.indices)?;
            let perm = e.perm.map(PermutationMatrix::new).transpose()?;
            let vector: Vec<Complex64> = e
                .vector_re
                .iter()
                .zip(&e.vector_im)
                .map(|(&re, &im)| Complex64::new(re, im))
                .collect();
            // cross-check the stored vector against its construction rule
            let expect = match file.scheme {
                Scheme::Regularized => Some(
                    sub.indices()
                        .iter()
                        .map(|&i| Complex64::new(if i % 2 == 0 { 1.0 } else { -1.0 }, 0.0))
                        .collect::<Vec<_>>(),
                ),
                _ => {
                    let base = array::rotated_symbol(&sub, file.m)?.into_vec();
                    Some(match &perm {
                        Some(p) => p.apply(&base)?,
                        None => base,
                    })
                }
            };
            if let Some(expect) = expect {
                let dev = expect
                    .iter()
                    .zip(&vector)
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0f64, f64::max);
                if dev > 1e-9 {
                    return Err(Error::DictionaryFormat(format!(
                        "stored vector for bit_index {} deviates by {dev}",
                        e.bit_index
                    )));
                }
            }
            entries.push(Codeword {
                sub,
                perm,
                vector,
                bit_index: e.bit_index,
            });
        }
        entries.sort_by_key(|e| e.bit_index);
        SymbolDictionary::from_entries(file.scheme, file.m, file.k, entries)
    }
}
