//! Combinatorial galleries of a fixed type in the standard apartment, their
//! walls and load-bearing walls, and the cellular decomposition of the
//! Bott-Samelson variety.
//!
//! A word `(k_r, ..., k_1)` is stored source-first. The letter at 1-based
//! position `p` carries the index `j = r - p + 1`; every report uses `j`.
//! Galleries are bit masks where bit `j - 1` is set when the gallery crosses
//! at index `j`, so the numeric order of masks is the lexicographic order of
//! the source-first bit strings.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::cartan::{is_reduced, min_coset_rep, CartanDatum, ParabolicType, Root, WeylElement, Word};
use crate::error::{Error, Result};

/// Longest supported word.
pub const MAX_WORD_LEN: usize = 24;

/// The type of a minimal gallery: a reduced word and a target face type.
#[derive(Clone, Debug)]
pub struct GalleryType {
    datum: Arc<CartanDatum>,
    word: Word,
    target_type: ParabolicType,
    element: WeylElement,
}

impl GalleryType {
    pub fn new(datum: Arc<CartanDatum>, word: Word, target_type: ParabolicType) -> Result<GalleryType> {
        if word.len() > MAX_WORD_LEN {
            return Err(Error::WordTooLong { len: word.len(), max: MAX_WORD_LEN });
        }
        word.validate(&datum)?;
        target_type.validate(&datum)?;
        if !is_reduced(&datum, &word) {
            return Err(Error::NonReducedWord(word.to_string()));
        }
        let element = WeylElement::from_word(&datum, &word)?;
        if min_coset_rep(&datum, &element, target_type) != element {
            return Err(Error::NotMinimalCosetRep { word: word.to_string(), target: target_type.to_string() });
        }
        Ok(GalleryType { datum, word, target_type, element })
    }

    pub fn datum(&self) -> &CartanDatum {
        &self.datum
    }

    pub fn shared_datum(&self) -> &Arc<CartanDatum> {
        &self.datum
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn target_type(&self) -> ParabolicType {
        self.target_type
    }

    /// The product of the word.
    pub fn element(&self) -> &WeylElement {
        &self.element
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// The letter `k_j` at index `j`.
    pub fn letter(&self, j: usize) -> usize {
        self.word.letters()[self.position(j)]
    }

    /// 0-based storage position of index `j`.
    pub fn position(&self, j: usize) -> usize {
        debug_assert!((1..=self.len()).contains(&j));
        self.len() - j
    }

    /// Indices `r, ..., 1` in source-first order.
    pub fn indices(&self) -> impl Iterator<Item = usize> {
        (1..=self.len()).rev()
    }
}

pub fn gallery_type(datum: &CartanDatum, word: &Word, target_type: ParabolicType) -> Result<GalleryType> {
    GalleryType::new(Arc::new(datum.clone()), word.clone(), target_type)
}

/// A combinatorial gallery `[gamma_r, ..., gamma_1]`, `gamma_j` in `{s_{k_j}, 1}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gallery {
    mask: u32,
    len: u8,
}

impl Gallery {
    pub fn from_mask(len: usize, mask: u32) -> Gallery {
        assert!(len <= MAX_WORD_LEN);
        assert!(len == 32 || mask >> len == 0, "mask has bits beyond the gallery length");
        Gallery { mask, len: len as u8 }
    }

    pub fn all_bends(len: usize) -> Gallery {
        Gallery::from_mask(len, 0)
    }

    pub fn all_crossings(len: usize) -> Gallery {
        Gallery::from_mask(len, full_mask(len))
    }

    /// Builds a gallery from its crossing indices.
    pub fn from_crossings(len: usize, crossings: impl IntoIterator<Item = usize>) -> Gallery {
        let mask = crossings.into_iter().fold(0, |m, j| {
            assert!((1..=len).contains(&j), "index {j} out of range");
            m | 1 << (j - 1)
        });
        Gallery::from_mask(len, mask)
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// `gamma_j = s_{k_j}`.
    pub fn crosses(&self, j: usize) -> bool {
        self.mask & (1 << (j - 1)) != 0
    }

    pub fn crossings(&self) -> IndexSet {
        IndexSet(self.mask)
    }
}

fn full_mask(len: usize) -> u32 {
    if len == 0 {
        0
    } else {
        u32::MAX >> (32 - len)
    }
}

/// Source-first bit string, `1` for a crossing.
impl fmt::Display for Gallery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in (1..=self.len()).rev() {
            f.write_str(if self.crosses(j) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Gallery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gallery({self})")
    }
}

impl FromStr for Gallery {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Gallery, String> {
        let s = s.trim();
        if s.len() > MAX_WORD_LEN {
            return Err(format!("gallery longer than {MAX_WORD_LEN}"));
        }
        let mut mask = 0u32;
        for c in s.chars() {
            mask <<= 1;
            match c {
                '1' => mask |= 1,
                '0' => {}
                _ => return Err(format!("invalid gallery character {c:?}")),
            }
        }
        Ok(Gallery::from_mask(s.len(), mask))
    }
}

/// A set of indices in `{1, ..., 32}`, bit `j - 1` for index `j`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSet(u32);

impl IndexSet {
    pub fn empty() -> IndexSet {
        IndexSet(0)
    }

    pub fn from_bits(bits: u32) -> IndexSet {
        IndexSet(bits)
    }

    pub fn bits(&self) -> u32 {
        self.0
    }

    pub fn contains(&self, j: usize) -> bool {
        j >= 1 && self.0 & (1 << (j - 1)) != 0
    }

    pub fn insert(&mut self, j: usize) {
        self.0 |= 1 << (j - 1);
    }

    pub fn remove(&mut self, j: usize) {
        self.0 &= !(1 << (j - 1));
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn difference(&self, other: &IndexSet) -> IndexSet {
        IndexSet(self.0 & !other.0)
    }

    /// Indices in descending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=32).rev().filter(move |&j| self.contains(j))
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for IndexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> IndexSet {
        let mut s = IndexSet::empty();
        for j in iter {
            s.insert(j);
        }
        s
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|j| j.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StepKind {
    Crossing,
    Bend,
}

/// The wall met by a gallery at one index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallRecord {
    pub index: usize,
    pub letter: usize,
    /// The unsigned wall `|beta_j|`.
    pub wall: Root,
    /// `beta_j = (gamma_r ... gamma_j)(alpha_{k_j})`.
    pub beta: Root,
    pub kind: StepKind,
    pub load_bearing: bool,
}

impl WallRecord {
    pub fn is_crossing(&self) -> bool {
        self.kind == StepKind::Crossing
    }
}

fn check_len(tau: &GalleryType, gamma: &Gallery) {
    assert_eq!(tau.len(), gamma.len(), "gallery length does not match the type");
}

/// Enumerates all `2^r` galleries of type `tau` in increasing mask order.
pub fn enumerate_galleries(tau: &GalleryType) -> Vec<Gallery> {
    let r = tau.len();
    (0..=full_mask(r)).map(|m| Gallery::from_mask(r, m)).collect()
}

/// The product `gamma_r ... gamma_1`.
pub fn product(tau: &GalleryType, gamma: &Gallery) -> WeylElement {
    check_len(tau, gamma);
    let d = tau.datum();
    tau.indices().filter(|&j| gamma.crosses(j)).fold(WeylElement::identity(d), |v, j| v.times_simple(d, tau.letter(j)))
}

/// The minimal coset representative of the target face of `gamma`.
pub fn target(tau: &GalleryType, gamma: &Gallery) -> WeylElement {
    min_coset_rep(tau.datum(), &product(tau, gamma), tau.target_type())
}

/// The wall sequence, indices `r` down to `1`.
pub fn wall_sequence(tau: &GalleryType, gamma: &Gallery) -> Vec<WallRecord> {
    check_len(tau, gamma);
    let d = tau.datum();
    let mut v = WeylElement::identity(d);
    let mut records = Vec::with_capacity(tau.len());
    for j in tau.indices() {
        let k = tau.letter(j);
        let kind = if gamma.crosses(j) {
            v = v.times_simple(d, k);
            StepKind::Crossing
        } else {
            StepKind::Bend
        };
        let beta = v.images()[k - 1];
        records.push(WallRecord { index: j, letter: k, wall: beta.abs(), beta, kind, load_bearing: beta.is_negative() });
    }
    debug_assert_eq!(records.iter().map(|w| w.load_bearing).collect::<Vec<_>>(), half_space_test(tau, gamma));
    records
}

/// Load-bearing flags by the half-space test, in source-first order: with
/// `u_j = gamma_r ... gamma_j`, the wall `|beta_j|` separates `C` from the
/// chamber `u_j(C)` when `u_j^{-1}(|beta_j|) < 0`. The inverse prefix is
/// tracked by left multiplication, independently of the sign test.
pub fn half_space_test(tau: &GalleryType, gamma: &Gallery) -> Vec<bool> {
    check_len(tau, gamma);
    let d = tau.datum();
    let mut prefix = WeylElement::identity(d);
    let mut prefix_inv = WeylElement::identity(d);
    let mut out = Vec::with_capacity(tau.len());
    for j in tau.indices() {
        let k = tau.letter(j);
        if gamma.crosses(j) {
            prefix = prefix.times_simple(d, k);
            prefix_inv = prefix_inv.simple_times(d, k);
        }
        let wall = prefix.apply(&d.simple_root(k)).abs();
        out.push(prefix_inv.apply(&wall).is_negative());
    }
    out
}

/// `J(gamma)`, the indices of load-bearing walls.
pub fn load_bearing_set(tau: &GalleryType, gamma: &Gallery) -> IndexSet {
    wall_sequence(tau, gamma).iter().filter(|w| w.load_bearing).map(|w| w.index).collect()
}

/// Minimal galleries meet pairwise distinct walls, exactly the walls
/// separating `C` from the target face.
pub fn is_minimal_gallery(tau: &GalleryType, gamma: &Gallery) -> bool {
    let walls: Vec<Root> = wall_sequence(tau, gamma).iter().map(|w| w.wall).collect();
    let distinct: BTreeSet<Root> = walls.iter().copied().collect();
    distinct.len() == walls.len() && distinct == target(tau, gamma).inversion_set(tau.datum())
}

/// The closure order on cells: `J(delta)` is contained in `J(gamma)`.
pub fn cell_order_leq(tau: &GalleryType, delta: &Gallery, gamma: &Gallery) -> bool {
    load_bearing_set(tau, delta).is_subset(&load_bearing_set(tau, gamma))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellRow {
    pub gallery: Gallery,
    pub load_bearing: IndexSet,
    pub target: WeylElement,
}

impl CellRow {
    pub fn dim(&self) -> usize {
        self.load_bearing.len()
    }
}

/// The cellular decomposition of the Bott-Samelson variety.
#[derive(Clone, Debug)]
pub struct CellsReport {
    pub rows: Vec<CellRow>,
    /// `poincare[p]` counts the cells of dimension `p`.
    pub poincare: Vec<u64>,
}

pub fn bs_cells_report(tau: &GalleryType) -> CellsReport {
    let mut poincare = vec![0u64; tau.len() + 1];
    let rows: Vec<CellRow> = enumerate_galleries(tau)
        .into_iter()
        .map(|gallery| {
            let row = CellRow { gallery, load_bearing: load_bearing_set(tau, &gallery), target: target(tau, &gallery) };
            poincare[row.dim()] += 1;
            row
        })
        .collect();
    CellsReport { rows, poincare }
}

/// One factor of the chart map: `p_root(x_j) * (s_{k_j} or 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartEntry {
    pub index: usize,
    pub letter: usize,
    /// `alpha_{k_j}` on a crossing, `-alpha_{k_j}` on a bend.
    pub root: Root,
    pub reflection: bool,
}

/// The affine chart `U^gamma` around a combinatorial gallery, with the
/// coordinates that are free on the cell `C^gamma`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartSpec {
    pub entries: Vec<ChartEntry>,
    pub cell_coordinates: IndexSet,
}

pub fn chart(tau: &GalleryType, gamma: &Gallery) -> ChartSpec {
    check_len(tau, gamma);
    let d = tau.datum();
    let entries = tau
        .indices()
        .map(|j| {
            let k = tau.letter(j);
            let alpha = d.simple_root(k);
            let reflection = gamma.crosses(j);
            ChartEntry { index: j, letter: k, root: if reflection { alpha } else { -alpha }, reflection }
        })
        .collect();
    ChartSpec { entries, cell_coordinates: load_bearing_set(tau, gamma) }
}
