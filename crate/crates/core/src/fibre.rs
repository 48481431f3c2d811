//! Fibres of the Bott-Samelson resolution over T-fixed points of the Schubert
//! variety: galleries over a fixed point, wall multiplicities, the block
//! decomposition, cell equations, dimensions and components.

pub mod deodhar;

use std::collections::BTreeSet;
use std::fmt;

use crate::cartan::{bruhat_leq, min_coset_rep, CartanDatum, ParabolicType, Root, WeylElement};
use crate::error::{Error, Result};
use crate::gallery::{load_bearing_set, target, wall_sequence, Gallery, GalleryType, IndexSet, WallRecord};

pub use deodhar::{deodhar_polynomial, distinguished_polynomial};

/// Which walls are counted as containing the target face `F_x`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum TargetWalls {
    /// One wall per positive root of the parabolic subsystem, moved by `u`.
    #[default]
    Full,
    /// One wall per simple generator of the target type, moved by `u`.
    Simple,
}

impl fmt::Display for TargetWalls {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TargetWalls::Full => "full",
            TargetWalls::Simple => "simple",
        })
    }
}

/// A T-fixed point `x = u P` of the flag variety `G/P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPoint {
    u: WeylElement,
    target_type: ParabolicType,
    convention: TargetWalls,
    face_walls: Vec<Root>,
    separating_walls: BTreeSet<Root>,
}

impl FixedPoint {
    /// The fixed point of the coset `w W_{T0}`; `w` need not be minimal.
    pub fn new(datum: &CartanDatum, w: &WeylElement, target_type: ParabolicType, convention: TargetWalls) -> FixedPoint {
        let u = min_coset_rep(datum, w, target_type);
        let sources: Vec<Root> = match convention {
            TargetWalls::Full => datum.parabolic_positive_roots(target_type),
            TargetWalls::Simple => target_type.generators().into_iter().map(|i| datum.simple_root(i)).collect(),
        };
        let mut face_walls: Vec<Root> = sources.iter().map(|nu| u.apply(nu).abs()).collect::<BTreeSet<_>>().into_iter().collect();
        face_walls.sort_by_key(|r| (r.height(), *r));
        let separating_walls = u.inversion_set(datum);
        FixedPoint { u, target_type, convention, face_walls, separating_walls }
    }

    pub fn u(&self) -> &WeylElement {
        &self.u
    }

    pub fn target_type(&self) -> ParabolicType {
        self.target_type
    }

    pub fn convention(&self) -> TargetWalls {
        self.convention
    }

    /// Walls through `F_x`, in the order of their negative indices `-1, -2, ...`.
    pub fn face_walls(&self) -> &[Root] {
        &self.face_walls
    }

    /// Walls separating `C` from `F_x`.
    pub fn separating_walls(&self) -> &BTreeSet<Root> {
        &self.separating_walls
    }

    pub fn separates(&self, wall: &Root) -> bool {
        self.separating_walls.contains(wall)
    }

    /// The negative index of a face wall.
    pub fn sentinel(&self, wall: &Root) -> Option<i32> {
        self.face_walls.iter().position(|w| w == wall).map(|p| -(p as i32) - 1)
    }
}

/// The indices at which one wall occurs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallOccurrence {
    pub wall: Root,
    /// Positive indices, descending.
    pub indices: Vec<usize>,
    /// Negative indices when the wall contains the target face.
    pub sentinels: Vec<i32>,
}

impl WallOccurrence {
    pub fn multiplicity(&self) -> usize {
        self.indices.len() + self.sentinels.len()
    }

    /// The smallest entry of the ordered list, positive indices first.
    pub fn last(&self) -> Option<i64> {
        self.sentinels.last().map(|&s| s as i64).or_else(|| self.indices.last().map(|&j| j as i64))
    }
}

/// The partition of the indices of a gallery by wall. Walls appear in the order
/// the gallery first meets them, followed by face walls it never meets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallOccurrences {
    pub walls: Vec<WallOccurrence>,
}

impl WallOccurrences {
    pub fn wall_of(&self, j: usize) -> Option<&WallOccurrence> {
        self.walls.iter().find(|w| w.indices.contains(&j))
    }
}

/// A load-bearing crossing followed by load-bearing bends on the same wall.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub wall: Root,
    /// Descending; the first entry is the crossing.
    pub indices: Vec<usize>,
}

impl Block {
    pub fn head(&self) -> usize {
        self.indices[0]
    }
}

/// A relation coefficient `n = +1 or -1`, or unknown when no sign table
/// covers the type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
    Unresolved,
}

impl Sign {
    fn from_value(n: i32) -> Sign {
        if n > 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn value(&self) -> Option<i64> {
        match self {
            Sign::Plus => Some(1),
            Sign::Minus => Some(-1),
            Sign::Unresolved => None,
        }
    }
}

/// Conjugation signs of the group presentation.
pub trait SignSource {
    /// The `n` with `s_i p_beta(l) s_i^{-1} = p_{s_i(beta)}(n l)`, if known.
    fn sign(&self, letter: usize, beta: &Root) -> Option<i32>;
}

/// `x_lead - sum n_f x_f = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub wall: Root,
    pub lead: usize,
    pub terms: Vec<(usize, Sign)>,
}

impl Relation {
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        std::iter::once(self.lead).chain(self.terms.iter().map(|t| t.0))
    }

    pub fn is_resolved(&self) -> bool {
        self.terms.iter().all(|t| t.1 != Sign::Unresolved)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellEquations {
    /// Load-bearing indices whose coordinate vanishes on the fibre cell.
    pub zero_indices: IndexSet,
    pub relations: Vec<Relation>,
}

impl CellEquations {
    pub fn is_resolved(&self) -> bool {
        self.relations.iter().all(Relation::is_resolved)
    }
}

/// Per-wall contribution to the cell dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallDim {
    pub wall: Root,
    pub dim: usize,
    /// Relation emitted by the index condition on the last block.
    pub index_condition: bool,
    /// The wall separates `C` from `F_x`.
    pub separates: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibreCell {
    pub gallery: Gallery,
    pub load_bearing: IndexSet,
    pub j2: IndexSet,
    pub equations: CellEquations,
    pub wall_dims: Vec<WallDim>,
    pub dim: usize,
}

impl FibreCell {
    /// Whether the index condition and the separation test agree on every wall.
    pub fn relation_tests_agree(&self) -> bool {
        self.wall_dims.iter().all(|w| w.index_condition == w.separates)
    }
}

#[derive(Clone, Debug)]
pub struct FibreReport {
    pub point: FixedPoint,
    pub cells: Vec<FibreCell>,
    /// `poincare[p]` counts the fibre cells of dimension `p`.
    pub poincare: Vec<u64>,
    pub dim: usize,
    /// Maximal galleries over the point, sorted by dimension then gallery.
    pub components: Vec<Gallery>,
    pub connected: bool,
}

fn check_point(tau: &GalleryType, x: &FixedPoint) -> Result<()> {
    if x.target_type() != tau.target_type() {
        return Err(Error::PointNotInVariety(format!("point of type {{{}}} for target type {{{}}}", x.target_type(), tau.target_type())));
    }
    Ok(())
}

/// All galleries of type `tau` with target `x`, in increasing mask order.
pub fn galleries_over(tau: &GalleryType, x: &FixedPoint) -> Vec<Gallery> {
    let d = tau.datum();
    let r = tau.len();
    let letters: Vec<usize> = tau.word().letters().to_vec();
    let t0 = x.target_type();
    let mut out = Vec::new();
    // Depth-first over source-first positions; prune when the coset of
    // v^{-1} u is farther than the remaining letters.
    fn walk(
        d: &CartanDatum,
        letters: &[usize],
        t0: ParabolicType,
        u: &WeylElement,
        p: usize,
        v: WeylElement,
        v_inv: WeylElement,
        mask: u32,
        out: &mut Vec<u32>,
    ) {
        let remaining = letters.len() - p;
        let distance = min_coset_rep(d, &v_inv.compose(d, u), t0).length();
        if distance > remaining {
            return;
        }
        if remaining == 0 {
            if min_coset_rep(d, &v, t0) == *u {
                out.push(mask);
            }
            return;
        }
        let k = letters[p];
        let bit = 1u32 << (remaining - 1);
        walk(d, letters, t0, u, p + 1, v.clone(), v_inv.clone(), mask, out);
        walk(d, letters, t0, u, p + 1, v.times_simple(d, k), v_inv.simple_times(d, k), mask | bit, out);
    }
    let id = WeylElement::identity(d);
    walk(d, &letters, t0, x.u(), 0, id.clone(), id, 0, &mut out);
    let mut galleries: Vec<Gallery> = out.into_iter().map(|m| Gallery::from_mask(r, m)).collect();
    galleries.sort();
    galleries
}

struct Analysis {
    records: Vec<WallRecord>,
    occurrences: WallOccurrences,
    load_bearing: IndexSet,
    j2: IndexSet,
}

impl Analysis {
    fn record(&self, j: usize) -> &WallRecord {
        let r = self.records.len();
        &self.records[r - j]
    }
}

fn analyse(tau: &GalleryType, gamma: &Gallery, x: &FixedPoint) -> Result<Analysis> {
    check_point(tau, x)?;
    let t = target(tau, gamma);
    if t != *x.u() {
        return Err(Error::TargetMismatch { gallery: gamma.to_string(), point: x.u().label(tau.datum()) });
    }
    let records = wall_sequence(tau, gamma);
    let mut walls: Vec<WallOccurrence> = Vec::new();
    for rec in &records {
        match walls.iter_mut().find(|w| w.wall == rec.wall) {
            Some(w) => w.indices.push(rec.index),
            None => walls.push(WallOccurrence { wall: rec.wall, indices: vec![rec.index], sentinels: Vec::new() }),
        }
    }
    for face in x.face_walls() {
        let sentinel = x.sentinel(face).expect("face wall has an index");
        match walls.iter_mut().find(|w| w.wall == *face) {
            Some(w) => w.sentinels.push(sentinel),
            None => walls.push(WallOccurrence { wall: *face, indices: Vec::new(), sentinels: vec![sentinel] }),
        }
    }
    let occurrences = WallOccurrences { walls };
    let load_bearing: IndexSet = records.iter().filter(|w| w.load_bearing).map(|w| w.index).collect();
    let j2: IndexSet = load_bearing
        .iter()
        .filter(|&j| occurrences.wall_of(j).is_some_and(|w| w.multiplicity() >= 2))
        .collect();
    Ok(Analysis { records, occurrences, load_bearing, j2 })
}

pub fn wall_occurrences(tau: &GalleryType, gamma: &Gallery, x: &FixedPoint) -> Result<WallOccurrences> {
    Ok(analyse(tau, gamma, x)?.occurrences)
}

/// Load-bearing indices whose wall occurs at least twice, counting the walls
/// through the target face.
pub fn j2_set(tau: &GalleryType, gamma: &Gallery, x: &FixedPoint) -> Result<IndexSet> {
    Ok(analyse(tau, gamma, x)?.j2)
}

fn blocks_of(a: &Analysis) -> Result<Vec<Block>> {
    let mut blocks = Vec::new();
    for occ in &a.occurrences.walls {
        let mut open: Option<Block> = None;
        for &j in &occ.indices {
            if !a.j2.contains(j) {
                blocks.extend(open.take());
                continue;
            }
            if a.record(j).is_crossing() {
                blocks.extend(open.take());
                open = Some(Block { wall: occ.wall, indices: vec![j] });
            } else {
                match open.as_mut() {
                    Some(b) => b.indices.push(j),
                    None => {
                        return Err(Error::MalformedStructure(format!(
                            "load-bearing bend at index {j} on wall {} has no earlier load-bearing crossing",
                            occ.wall
                        )))
                    }
                }
            }
        }
        blocks.extend(open);
    }
    Ok(blocks)
}

/// The blocks of each wall, walls in occurrence order and blocks descending.
pub fn blocks(tau: &GalleryType, gamma: &Gallery, x: &FixedPoint) -> Result<Vec<Block>> {
    blocks_of(&analyse(tau, gamma, x)?)
}

/// Slides `p_{-alpha_{k_f}}` leftwards to the head of its block and returns
/// the coefficient of `x_f` in the glued argument.
fn slide_sign(tau: &GalleryType, gamma: &Gallery, head: usize, f: usize, signs: Option<&dyn SignSource>) -> Result<Sign> {
    let d = tau.datum();
    let mut root = -d.simple_root(tau.letter(f));
    let mut product = Some(1);
    for i in f + 1..=head {
        if !gamma.crosses(i) {
            continue;
        }
        let k = tau.letter(i);
        product = match (product, signs.and_then(|s| s.sign(k, &root))) {
            (Some(p), Some(n)) => Some(p * n),
            _ => None,
        };
        root = d.reflect_vector(k, &root);
    }
    if root != d.simple_root(tau.letter(head)) {
        return Err(Error::InvariantViolation(format!("bend {f} does not slide onto the root of its head {head}")));
    }
    // The glued argument is x_head + prod * x_f, which reads x_head - n x_f.
    Ok(product.map_or(Sign::Unresolved, |p| Sign::from_value(-p)))
}

fn cell_of(tau: &GalleryType, gamma: &Gallery, x: &FixedPoint, signs: Option<&dyn SignSource>) -> Result<FibreCell> {
    let a = analyse(tau, gamma, x)?;
    let blocks = blocks_of(&a)?;
    let mut relations = Vec::new();
    let mut wall_dims = Vec::new();
    for occ in &a.occurrences.walls {
        let trace = occ.indices.iter().filter(|&&j| a.j2.contains(j)).count();
        if trace == 0 {
            continue;
        }
        let last_block = blocks.iter().rev().find(|b| b.wall == occ.wall).expect("a wall with a J2 trace has a block");
        let smallest = *last_block.indices.last().expect("blocks are nonempty") as i64;
        let index_condition = occ.last() == Some(smallest);
        let separates = x.separates(&occ.wall);
        if index_condition {
            let head = last_block.head();
            let terms = last_block.indices[1..]
                .iter()
                .map(|&f| Ok((f, slide_sign(tau, gamma, head, f, signs)?)))
                .collect::<Result<Vec<_>>>()?;
            relations.push(Relation { wall: occ.wall, lead: head, terms });
        }
        wall_dims.push(WallDim { wall: occ.wall, dim: trace - usize::from(index_condition), index_condition, separates });
    }
    let dim = wall_dims.iter().map(|w| w.dim).sum();
    let equations = CellEquations { zero_indices: a.load_bearing.difference(&a.j2), relations };
    Ok(FibreCell { gallery: *gamma, load_bearing: a.load_bearing, j2: a.j2, equations, wall_dims, dim })
}

/// The equations of the fibre cell `C^gamma_x` in the chart `U^gamma`:
/// coordinates off `J^2` vanish, and each wall passing the index condition
/// contributes one relation on its last block.
pub fn cell_equations(tau: &GalleryType, gamma: &Gallery, x: &FixedPoint, signs: Option<&dyn SignSource>) -> Result<CellEquations> {
    Ok(cell_of(tau, gamma, x, signs)?.equations)
}

pub fn fibre_cell(tau: &GalleryType, gamma: &Gallery, x: &FixedPoint, signs: Option<&dyn SignSource>) -> Result<FibreCell> {
    cell_of(tau, gamma, x, signs)
}

/// Assembles the fibre of the resolution over `x`.
pub fn fibre_report(tau: &GalleryType, x: &FixedPoint, signs: Option<&dyn SignSource>) -> Result<FibreReport> {
    check_point(tau, x)?;
    if !bruhat_leq(tau.datum(), x.u(), tau.element()) {
        return Err(Error::PointNotInVariety(x.u().label(tau.datum())));
    }
    let cells = galleries_over(tau, x).iter().map(|g| cell_of(tau, g, x, signs)).collect::<Result<Vec<_>>>()?;
    let dim = cells.iter().map(|c| c.dim).max().expect("the point lies in the variety, so some gallery reaches it");
    let mut poincare = vec![0u64; dim + 1];
    for c in &cells {
        poincare[c.dim] += 1;
    }

    let n = cells.len();
    let comparable = |a: usize, b: usize| {
        let (ja, jb) = (cells[a].load_bearing, cells[b].load_bearing);
        ja.is_subset(&jb) || jb.is_subset(&ja)
    };
    let mut components: Vec<usize> = (0..n)
        .filter(|&a| (0..n).all(|b| b == a || !cells[a].load_bearing.is_subset(&cells[b].load_bearing)))
        .collect();
    components.sort_by_key(|&a| (std::cmp::Reverse(cells[a].dim), cells[a].gallery));

    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], a: usize) -> usize {
        let mut root = a;
        while parent[root] != root {
            root = parent[root];
        }
        let mut cur = a;
        while parent[cur] != root {
            let next = parent[cur];
            parent[cur] = root;
            cur = next;
        }
        root
    }
    for a in 0..n {
        for b in a + 1..n {
            if comparable(a, b) {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
    }
    let roots: BTreeSet<usize> = (0..n).map(|a| find(&mut parent, a)).collect();

    Ok(FibreReport {
        point: x.clone(),
        components: components.iter().map(|&a| cells[a].gallery).collect(),
        connected: roots.len() == 1,
        cells,
        poincare,
        dim,
    })
}

/// The split `j(gamma) = dim C^gamma_x + l(u)` for `x` the target of `gamma`.
pub fn fibration_split_check(tau: &GalleryType, gamma: &Gallery) -> Result<bool> {
    let x = FixedPoint::new(tau.datum(), &target(tau, gamma), tau.target_type(), TargetWalls::Full);
    let cell = cell_of(tau, gamma, &x, None)?;
    Ok(load_bearing_set(tau, gamma).len() == cell.dim + x.u().length())
}
