//! A concrete realization of type `A_n` by `(n+1) x (n+1)` matrices over a
//! prime field, used as an independent check of the combinatorics.
//!
//! Generators: `p_beta(l) = 1 + l E_{ab}` where the root `e_a - e_b` labels the
//! entry `(a, b)`; the positive root `alpha_i + ... + alpha_{j-1}` is
//! `e_i - e_j`. The simple reflection `s_i` is the block `[[0, -1], [1, 0]]` on
//! coordinates `i, i+1`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rand::Rng;

use crate::cartan::{min_coset_rep, sort_elements, CartanDatum, Family, ParabolicType, Root, WeylElement};
use crate::error::{Error, Result};
use crate::fibre::{fibre_cell, FixedPoint, SignSource};
use crate::gallery::{chart, Gallery, GalleryType};

/// The prime field `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    p: u64,
}

impl FieldSpec {
    pub fn new(p: u64) -> Result<FieldSpec> {
        let prime = p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d));
        if !prime || p > u32::MAX as u64 {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldSpec { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn reduce(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    fn inv(&self, a: u64) -> u64 {
        let (mut base, mut exp, mut acc) = (a % self.p, self.p - 2, 1u64);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }
}

/// A square matrix over `F_p`.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    n: usize,
    field: FieldSpec,
    data: Vec<u64>,
}

impl Matrix {
    pub fn identity(n: usize, field: FieldSpec) -> Matrix {
        let mut m = Matrix { n, field, data: vec![0; n * n] };
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.n + j] = self.field.reduce(v);
    }

    /// The entry as a signed representative in `(-p/2, p/2]`.
    pub fn signed(&self, i: usize, j: usize) -> i64 {
        let v = self.get(i, j) as i64;
        let p = self.field.p as i64;
        if v > p / 2 {
            v - p
        } else {
            v
        }
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        let n = self.n;
        let p = self.field.p;
        let mut data = vec![0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] = (data[i * n + j] + a * other.data[k * n + j]) % p;
                }
            }
        }
        Matrix { n, field: self.field, data }
    }

    pub fn is_identity(&self) -> bool {
        *self == Matrix::identity(self.n, self.field)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<i64>> = (0..self.n).map(|i| (0..self.n).map(|j| self.signed(i, j)).collect()).collect();
        write!(f, "{rows:?}")
    }
}

fn require_type_a(datum: &CartanDatum) -> Result<()> {
    if datum.family() != Family::A {
        return Err(Error::UnsupportedType(format!("the matrix oracle realizes type A only, not {}", datum.name())));
    }
    Ok(())
}

/// The matrix entry `(a, b)`, 0-based, carrying the root `beta = e_a - e_b`.
fn root_entry(beta: &Root) -> (usize, usize) {
    let support: Vec<usize> = beta.support().collect();
    let (lo, hi) = (support[0], support[support.len() - 1]);
    if beta.is_positive() {
        (lo - 1, hi)
    } else {
        (hi, lo - 1)
    }
}

/// `e_a - e_b` in simple-root coordinates, 0-based `a != b`.
fn root_of_entry(rank: usize, a: usize, b: usize) -> Root {
    let (lo, hi, sign) = if a < b { (a, b, 1) } else { (b, a, -1) };
    let mut coeffs = vec![0; rank];
    for c in coeffs.iter_mut().take(hi).skip(lo) {
        *c = sign;
    }
    Root::from_coeffs(&coeffs)
}

/// `p_beta(lambda)`.
pub fn unipotent(datum: &CartanDatum, beta: &Root, lambda: i64, field: FieldSpec) -> Result<Matrix> {
    require_type_a(datum)?;
    if !datum.is_root(beta) {
        return Err(Error::NotARoot(beta.to_string()));
    }
    let mut m = Matrix::identity(datum.rank() + 1, field);
    let (a, b) = root_entry(beta);
    m.set(a, b, lambda);
    Ok(m)
}

/// The representative of `s_i`.
pub fn reflection_matrix(datum: &CartanDatum, i: usize, field: FieldSpec) -> Result<Matrix> {
    require_type_a(datum)?;
    datum.check_letter(i)?;
    let mut m = Matrix::identity(datum.rank() + 1, field);
    m.set(i - 1, i - 1, 0);
    m.set(i, i, 0);
    m.set(i - 1, i, -1);
    m.set(i, i - 1, 1);
    Ok(m)
}

fn reflection_inverse(datum: &CartanDatum, i: usize, field: FieldSpec) -> Result<Matrix> {
    let s = reflection_matrix(datum, i, field)?;
    Ok(s.mul(&s).mul(&s))
}

const SIGN_FIELD: u64 = 101;

/// The `n = +-1` with `s_i p_beta(l) s_i^{-1} = p_{s_i(beta)}(n l)`.
pub fn sign_n(datum: &CartanDatum, i: usize, beta: &Root) -> Result<i32> {
    let field = FieldSpec::new(SIGN_FIELD)?;
    let conj = reflection_matrix(datum, i, field)?.mul(&unipotent(datum, beta, 1, field)?).mul(&reflection_inverse(datum, i, field)?);
    let image = datum.reflect(i, beta)?;
    let (a, b) = root_entry(&image);
    let n = conj.signed(a, b);
    if n.abs() != 1 || unipotent(datum, &image, n, field)? != conj {
        return Err(Error::InvariantViolation(format!("conjugate of p_{beta} by s_{i} is not a root element")));
    }
    Ok(n as i32)
}

/// All conjugation signs of one type-A datum.
#[derive(Clone, Debug)]
pub struct SignTable {
    signs: HashMap<(usize, Root), i32>,
}

impl SignTable {
    pub fn type_a(datum: &CartanDatum) -> Result<SignTable> {
        require_type_a(datum)?;
        let mut signs = HashMap::new();
        for i in 1..=datum.rank() {
            for beta in datum.roots() {
                signs.insert((i, *beta), sign_n(datum, i, beta)?);
            }
        }
        Ok(SignTable { signs })
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }
}

impl SignSource for SignTable {
    fn sign(&self, letter: usize, beta: &Root) -> Option<i32> {
        self.signs.get(&(letter, *beta)).copied()
    }
}

/// Permutation `a -> w(a)` of `0..=n` for a type-A Weyl element.
pub fn permutation(datum: &CartanDatum, w: &WeylElement) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..=datum.rank()).collect();
    for &k in w.reduced_word(datum).letters() {
        perm.swap(k - 1, k);
    }
    perm
}

/// The `w` with `g` in `B w B`, by column reduction: the pivot of each column
/// is its lowest nonzero entry, rows above and columns to the right are
/// cleared.
pub fn bruhat_cell(datum: &CartanDatum, g: &Matrix) -> WeylElement {
    let n = g.size();
    let field = g.field;
    let p = field.p;
    let mut m = g.clone();
    let mut pivot_row = vec![0usize; n];
    for c in 0..n {
        let i = (0..n).rev().find(|&i| m.get(i, c) != 0).expect("matrix is invertible");
        pivot_row[c] = i;
        let inv = field.inv(m.get(i, c));
        for above in 0..i {
            let f = m.get(above, c) * inv % p;
            if f != 0 {
                for k in 0..n {
                    let v = (m.get(above, k) + p - f * m.get(i, k) % p) % p;
                    m.data[above * n + k] = v;
                }
            }
        }
        for right in c + 1..n {
            let f = m.get(i, right) * inv % p;
            if f != 0 {
                for row in 0..n {
                    let v = (m.get(row, right) + p - f * m.get(row, c) % p) % p;
                    m.data[row * n + right] = v;
                }
            }
        }
    }
    let images: Vec<Root> = (0..n - 1).map(|j| root_of_entry(datum.rank(), pivot_row[j], pivot_row[j + 1])).collect();
    WeylElement::from_images(datum, images)
}

/// Block index of each coordinate for the parabolic type `t0`.
fn blocks_of(rank: usize, t0: ParabolicType) -> Vec<usize> {
    let mut block = vec![0; rank + 1];
    for a in 1..=rank {
        block[a] = block[a - 1] + usize::from(!t0.contains(a));
    }
    block
}

/// `g P = u P` for the standard parabolic `P` of type `t0`.
pub fn lies_over(datum: &CartanDatum, g: &Matrix, u: &WeylElement, t0: ParabolicType) -> bool {
    let perm = permutation(datum, u);
    let block = blocks_of(datum.rank(), t0);
    let n = datum.rank() + 1;
    (0..n).all(|a| (0..n).all(|b| block[a] <= block[b] || g.get(perm[a], b) == 0))
}

/// A point `[g_r, ..., g_1]` of the Bott-Samelson variety in the chart of a
/// combinatorial gallery.
#[derive(Clone, Debug)]
pub struct PointedGallery {
    pub tau: GalleryType,
    pub chart: Gallery,
    /// `(x_r, ..., x_1)`.
    pub coords: Vec<u64>,
    pub factors: Vec<Matrix>,
    pub product: Matrix,
}

pub fn realize_point(tau: &GalleryType, gamma: &Gallery, coords: &[i64], field: FieldSpec) -> Result<PointedGallery> {
    let d = tau.datum();
    require_type_a(d)?;
    if coords.len() != tau.len() {
        return Err(Error::InvariantViolation(format!("{} coordinates for a word of length {}", coords.len(), tau.len())));
    }
    let spec = chart(tau, gamma);
    let mut factors = Vec::with_capacity(tau.len());
    let mut product = Matrix::identity(d.rank() + 1, field);
    for (entry, &x) in spec.entries.iter().zip(coords) {
        let mut g = unipotent(d, &entry.root, x, field)?;
        if entry.reflection {
            g = g.mul(&reflection_matrix(d, entry.letter, field)?);
        }
        product = product.mul(&g);
        factors.push(g);
    }
    Ok(PointedGallery { tau: tau.clone(), chart: *gamma, coords: coords.iter().map(|&x| field.reduce(x)).collect(), factors, product })
}

impl PointedGallery {
    /// The Bruhat cell of the image point in `G/P`, as a minimal coset representative.
    pub fn target_flag(&self) -> WeylElement {
        let d = self.tau.datum();
        min_coset_rep(d, &bruhat_cell(d, &self.product), self.tau.target_type())
    }

    /// The image point is the fixed point `u P`.
    pub fn lies_over(&self, u: &WeylElement) -> bool {
        lies_over(self.tau.datum(), &self.product, u, self.tau.target_type())
    }
}

/// Retraction onto the standard apartment: the chamber after each step is the
/// Bruhat cell of the prefix product, and a step crosses when the cell changes.
pub fn retract_point(pg: &PointedGallery) -> Gallery {
    let d = pg.tau.datum();
    let r = pg.tau.len();
    let mut prefix = Matrix::identity(d.rank() + 1, pg.product.field);
    let mut cell = WeylElement::identity(d);
    let mut mask = 0u32;
    for (p, g) in pg.factors.iter().enumerate() {
        prefix = prefix.mul(g);
        let next = bruhat_cell(d, &prefix);
        if next != cell {
            mask |= 1 << (r - 1 - p);
        }
        cell = next;
    }
    Gallery::from_mask(r, mask)
}

/// Point counts of the Bott-Samelson variety over `F_q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    pub q: u64,
    pub total: u128,
    /// Points per retraction class.
    pub per_class: BTreeMap<Gallery, u64>,
    /// Points over each T-fixed point, sorted by the fixed point.
    pub per_point: Vec<(WeylElement, u64)>,
}

pub const DEFAULT_BUDGET: u128 = 10_000_000;

/// Walks the chart tree: at each letter either the point `p_alpha(t) s B` for
/// one of the `q` values of `t`, or the point `B` itself.
pub fn enumerate_points_fq(tau: &GalleryType, field: FieldSpec, budget: u128) -> Result<Census> {
    let d = tau.datum();
    require_type_a(d)?;
    let q = field.p();
    let r = tau.len();
    let points = (q as u128 + 1).checked_pow(r as u32).unwrap_or(u128::MAX);
    if points > budget {
        return Err(Error::BudgetExceeded { points, budget });
    }
    let letters = tau.word().letters();
    let crossings: Vec<Vec<Matrix>> = letters
        .iter()
        .map(|&k| {
            let alpha = d.simple_root(k);
            let s = reflection_matrix(d, k, field)?;
            (0..q).map(|t| Ok(unipotent(d, &alpha, t as i64, field)?.mul(&s))).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    struct Walk<'a> {
        datum: &'a CartanDatum,
        tau: &'a GalleryType,
        crossings: &'a [Vec<Matrix>],
        per_class: HashMap<u32, u64>,
        per_point: HashMap<WeylElement, u64>,
    }

    impl Walk<'_> {
        fn visit(&mut self, p: usize, prefix: &Matrix, cell: &WeylElement, mask: u32) {
            let r = self.crossings.len();
            if p == r {
                *self.per_class.entry(mask).or_default() += 1;
                let u = min_coset_rep(self.datum, cell, self.tau.target_type());
                if lies_over(self.datum, prefix, &u, self.tau.target_type()) {
                    *self.per_point.entry(u).or_default() += 1;
                }
                return;
            }
            self.visit(p + 1, prefix, cell, mask);
            for g in &self.crossings[p] {
                let next = prefix.mul(g);
                let next_cell = bruhat_cell(self.datum, &next);
                let bit = if next_cell != *cell { 1 << (r - 1 - p) } else { 0 };
                self.visit(p + 1, &next, &next_cell, mask | bit);
            }
        }
    }

    let mut walk = Walk { datum: d, tau, crossings: &crossings, per_class: HashMap::new(), per_point: HashMap::new() };
    walk.visit(0, &Matrix::identity(d.rank() + 1, field), &WeylElement::identity(d), 0);

    let total = walk.per_class.values().map(|&c| c as u128).sum();
    let per_class = walk.per_class.into_iter().map(|(m, c)| (Gallery::from_mask(r, m), c)).collect();
    let mut keys: Vec<WeylElement> = walk.per_point.keys().cloned().collect();
    sort_elements(&mut keys);
    let per_point = keys.into_iter().map(|u| {
        let c = walk.per_point[&u];
        (u, c)
    });
    Ok(Census { q, total, per_class, per_point: per_point.collect() })
}

/// A sampled coordinate vector that contradicts the cell equations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub gallery: Gallery,
    /// `(x_r, ..., x_1)`.
    pub coords: Vec<u64>,
    /// The sample satisfied the equations, so it should have reached the point.
    pub on_variety: bool,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coords: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        let what = if self.on_variety { "satisfies the equations but misses" } else { "violates a relation but reaches" };
        write!(f, "gallery {} with coordinates ({}) {what} the point", self.gallery, coords.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleOutcome {
    pub pass: bool,
    pub on_variety_trials: usize,
    pub violating_trials: usize,
    pub counterexample: Option<Counterexample>,
}

/// Samples points of the chart `U^gamma` on the cell, both satisfying the cell
/// equations and violating exactly one relation, and checks which reach `x`.
pub fn sample_check_cell<R: Rng>(
    tau: &GalleryType,
    gamma: &Gallery,
    x: &FixedPoint,
    field: FieldSpec,
    trials: usize,
    rng: &mut R,
) -> Result<SampleOutcome> {
    let d = tau.datum();
    require_type_a(d)?;
    let signs = SignTable::type_a(d)?;
    let cell = fibre_cell(tau, gamma, x, Some(&signs))?;
    if !cell.equations.is_resolved() {
        return Err(Error::UnresolvedSigns);
    }
    let r = tau.len();
    let p = field.p() as i64;
    let position = |j: usize| r - j;
    let leads: Vec<usize> = cell.equations.relations.iter().map(|rel| rel.lead).collect();

    let sample = |rng: &mut R| -> Vec<i64> {
        let mut coords = vec![0i64; r];
        for j in cell.j2.iter().filter(|j| !leads.contains(j)) {
            coords[position(j)] = rng.gen_range(0..p);
        }
        for rel in &cell.equations.relations {
            let value: i64 = rel.terms.iter().map(|&(f, s)| s.value().expect("resolved") * coords[position(f)]).sum();
            coords[position(rel.lead)] = value.rem_euclid(p);
        }
        coords
    };

    let mut outcome = SampleOutcome { pass: true, on_variety_trials: 0, violating_trials: 0, counterexample: None };
    let fail = |outcome: &mut SampleOutcome, coords: &[i64], on_variety: bool| {
        if outcome.pass {
            outcome.pass = false;
            outcome.counterexample =
                Some(Counterexample { gallery: *gamma, coords: coords.iter().map(|&c| field.reduce(c)).collect(), on_variety });
        }
    };
    for _ in 0..trials {
        let coords = sample(rng);
        outcome.on_variety_trials += 1;
        if !realize_point(tau, gamma, &coords, field)?.lies_over(x.u()) {
            fail(&mut outcome, &coords, true);
        }
    }
    if !leads.is_empty() {
        for _ in 0..trials {
            let mut coords = sample(rng);
            let lead = leads[rng.gen_range(0..leads.len())];
            coords[position(lead)] = (coords[position(lead)] + rng.gen_range(1..p)) % p;
            outcome.violating_trials += 1;
            if realize_point(tau, gamma, &coords, field)?.lies_over(x.u()) {
                fail(&mut outcome, &coords, false);
            }
        }
    }
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::Word;
    use crate::fibre::{fibre_report, galleries_over, TargetWalls};
    use crate::gallery::{enumerate_galleries, gallery_type, load_bearing_set, target};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn datum(name: &str) -> CartanDatum {
        name.parse().unwrap()
    }

    fn f(p: u64) -> FieldSpec {
        FieldSpec::new(p).unwrap()
    }

    fn r(c: &[i32]) -> Root {
        Root::from_coeffs(c)
    }

    fn tau(name: &str, word: &str) -> GalleryType {
        gallery_type(&datum(name), &word.parse().unwrap(), ParabolicType::empty()).unwrap()
    }

    fn elem(d: &CartanDatum, w: &str) -> WeylElement {
        WeylElement::from_word(d, &w.parse::<Word>().unwrap()).unwrap()
    }

    #[test]
    fn fields() {
        assert!(FieldSpec::new(101).is_ok());
        assert_eq!(FieldSpec::new(4), Err(Error::NotPrime(4)));
        assert_eq!(FieldSpec::new(1), Err(Error::NotPrime(1)));
        assert_eq!(f(7).inv(3) * 3 % 7, 1);
    }

    #[test]
    fn unipotents() {
        let a1 = datum("A1");
        let m = unipotent(&a1, &r(&[1]), 5, f(7)).unwrap();
        assert_eq!((m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1)), (1, 5, 0, 1));
        assert!(unipotent(&a1, &r(&[1]), 0, f(7)).unwrap().is_identity());
        let a2 = datum("A2");
        let m = unipotent(&a2, &r(&[1, 1]), 3, f(7)).unwrap();
        assert_eq!(m.get(0, 2), 3);
        assert!(unipotent(&datum("B2"), &r(&[1, 0]), 1, f(7)).is_err());
        assert!(unipotent(&a2, &r(&[1, 2]), 1, f(7)).is_err());
    }

    #[test]
    fn additivity_and_commutators() {
        let field = f(101);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for name in ["A2", "A3"] {
            let d = datum(name);
            for a in d.roots() {
                for _ in 0..5 {
                    let (l, m) = (rng.gen_range(0..101), rng.gen_range(0..101));
                    let lhs = unipotent(&d, a, l, field).unwrap().mul(&unipotent(&d, a, m, field).unwrap());
                    assert_eq!(lhs, unipotent(&d, a, l + m, field).unwrap());
                }
                for b in d.roots() {
                    if a == b || *a == -*b {
                        continue;
                    }
                    let (l, m) = (rng.gen_range(1..101), rng.gen_range(1..101));
                    let pa = unipotent(&d, a, l, field).unwrap();
                    let pb = unipotent(&d, b, m, field).unwrap();
                    let pa_inv = unipotent(&d, a, -l, field).unwrap();
                    let pb_inv = unipotent(&d, b, -m, field).unwrap();
                    let comm = pa.mul(&pb).mul(&pa_inv).mul(&pb_inv);
                    let sum = a.add_scaled(1, b);
                    if d.is_root(&sum) {
                        // Only p = q = 1 occurs in simply laced types; the constant is +-1.
                        let c = (-1..=1).filter(|&c| c != 0).find(|&c| unipotent(&d, &sum, c * l * m, field).unwrap() == comm);
                        assert!(c.is_some(), "{a} {b}");
                    } else {
                        assert!(comm.is_identity(), "{a} {b}");
                    }
                }
            }
        }
    }

    #[test]
    fn signs() {
        let a1 = datum("A1");
        assert_eq!(sign_n(&a1, 1, &r(&[1])).unwrap(), -1);
        assert_eq!(sign_n(&a1, 1, &r(&[-1])).unwrap(), -1);
        let a2 = datum("A2");
        // s_1 moves e_2 - e_3 to e_1 - e_3 and back; s_1^2 negates e_1 and e_2,
        // so the two signs multiply to -1.
        assert_eq!(sign_n(&a2, 1, &r(&[0, 1])).unwrap() * sign_n(&a2, 1, &r(&[1, 1])).unwrap(), -1);
        for name in ["A2", "A3", "A4"] {
            let d = datum(name);
            let table = SignTable::type_a(&d).unwrap();
            assert_eq!(table.len(), d.rank() * d.roots().len());
            for i in 1..=d.rank() {
                for beta in d.roots() {
                    let n = table.sign(i, beta).unwrap();
                    assert!(n == 1 || n == -1);
                    let (a, b) = root_entry(beta);
                    let disjoint = ![a, b].iter().any(|&c| c == i - 1 || c == i);
                    if disjoint {
                        assert_eq!(n, 1);
                    }
                }
            }
        }
    }

    #[test]
    fn double_conjugation_is_conjugation_by_the_square() {
        let field = f(101);
        let d = datum("A3");
        for i in 1..=3 {
            let s = reflection_matrix(&d, i, field).unwrap();
            let s2 = s.mul(&s);
            let s2_inv = s2.mul(&s2).mul(&s2);
            for beta in d.roots() {
                let image = d.reflect(i, beta).unwrap();
                let n = sign_n(&d, i, beta).unwrap() * sign_n(&d, i, &image).unwrap();
                let direct = s2.mul(&unipotent(&d, beta, 1, field).unwrap()).mul(&s2_inv);
                assert_eq!(direct, unipotent(&d, beta, n as i64, field).unwrap());
            }
        }
    }

    #[test]
    fn bruhat_cells_of_permutation_matrices() {
        let field = f(7);
        let d = datum("A3");
        for w in crate::cartan::bruhat_interval_below(&d, &"1,2,1,3,2,1".parse().unwrap()).unwrap() {
            let mut m = Matrix::identity(4, field);
            for &k in w.reduced_word(&d).letters() {
                m = m.mul(&reflection_matrix(&d, k, field).unwrap());
            }
            assert_eq!(bruhat_cell(&d, &m), w);
            assert!(lies_over(&d, &m, &w, ParabolicType::empty()));
            let perm = permutation(&d, &w);
            for a in 0..4 {
                assert_ne!(m.get(perm[a], a), 0);
            }
        }
    }

    #[test]
    fn lies_over_with_a_parabolic() {
        let field = f(5);
        let d = datum("A2");
        let t0 = ParabolicType::new([2]);
        let s2 = reflection_matrix(&d, 2, field).unwrap();
        assert!(lies_over(&d, &s2, &WeylElement::identity(&d), t0));
        assert!(!lies_over(&d, &s2, &WeylElement::identity(&d), ParabolicType::empty()));
        let s1 = reflection_matrix(&d, 1, field).unwrap();
        assert!(lies_over(&d, &s1, &elem(&d, "1"), t0));
    }

    #[test]
    fn chart_centres_realize_their_targets() {
        let field = f(5);
        for (name, word) in [("A2", "1,2,1"), ("A3", "2,1,3,2"), ("A3", "1,2,1,3,2,1")] {
            let t = tau(name, word);
            for gamma in enumerate_galleries(&t) {
                let pg = realize_point(&t, &gamma, &vec![0; t.len()], field).unwrap();
                assert_eq!(pg.target_flag(), target(&t, &gamma));
                assert!(pg.lies_over(&target(&t, &gamma)));
                assert_eq!(retract_point(&pg), gamma);
            }
        }
    }

    #[test]
    fn cell_points_retract_to_their_gallery() {
        let field = f(101);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let t = tau("A3", "1,2,1,3,2,1");
        for gamma in enumerate_galleries(&t) {
            let j = load_bearing_set(&t, &gamma);
            for _ in 0..5 {
                let coords: Vec<i64> = t.indices().map(|i| if j.contains(i) { rng.gen_range(0..101) } else { 0 }).collect();
                assert_eq!(retract_point(&realize_point(&t, &gamma, &coords, field).unwrap()), gamma);
            }
        }
        let a2 = tau("A2", "1,2,1");
        let pg = realize_point(&a2, &"101".parse().unwrap(), &[4, 0, 0], field).unwrap();
        assert_eq!(retract_point(&pg), "101".parse().unwrap());
        assert!(pg.lies_over(&WeylElement::identity(a2.datum())));
    }

    #[test]
    fn census_counts() {
        let t = tau("A2", "1,2,1");
        let c = enumerate_points_fq(&t, f(2), DEFAULT_BUDGET).unwrap();
        assert_eq!(c.total, 27);
        assert_eq!(c.per_point[0], (WeylElement::identity(t.datum()), 3));
        let t = tau("A3", "2,1,3,2");
        let c = enumerate_points_fq(&t, f(2), DEFAULT_BUDGET).unwrap();
        assert_eq!(c.total, 81);
        assert_eq!(c.per_point[0].1, 3);
        assert_eq!(c.per_class[&Gallery::all_bends(4)], 1);
        assert!(matches!(enumerate_points_fq(&t, f(3), 100), Err(Error::BudgetExceeded { points: 256, budget: 100 })));
        assert!(enumerate_points_fq(&tau("B2", "1,2"), f(2), DEFAULT_BUDGET).is_err());
    }

    #[test]
    fn census_matches_predictions() {
        for word in ["1,2,1", "2,1,3,2", "1,2,1,3,2", "3,2,1,2,3"] {
            let name = if word == "1,2,1" { "A2" } else { "A3" };
            let t = tau(name, word);
            for q in [2u64, 3] {
                let c = enumerate_points_fq(&t, f(q), DEFAULT_BUDGET).unwrap();
                assert_eq!(c.total, (q as u128 + 1).pow(t.len() as u32));
                for gamma in enumerate_galleries(&t) {
                    assert_eq!(c.per_class[&gamma], q.pow(load_bearing_set(&t, &gamma).len() as u32));
                }
                for (u, count) in &c.per_point {
                    let x = FixedPoint::new(t.datum(), u, t.target_type(), TargetWalls::Full);
                    let rep = fibre_report(&t, &x, None).unwrap();
                    let predicted: u64 = rep.poincare.iter().enumerate().map(|(p, n)| n * q.pow(p as u32)).sum();
                    assert_eq!(*count, predicted, "{word} over {u:?}");
                }
            }
        }
    }

    #[test]
    fn sampling_small_cells_passes() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let t = tau("A3", "2,1,3,2");
        let x = FixedPoint::new(t.datum(), &WeylElement::identity(t.datum()), ParabolicType::empty(), TargetWalls::Full);
        let out = sample_check_cell(&t, &"1001".parse().unwrap(), &x, f(101), 100, &mut rng).unwrap();
        assert!(out.pass);
        assert_eq!(out.violating_trials, 0);
        let b2 = tau("B2", "1,2,1,2");
        let xb = FixedPoint::new(b2.datum(), &WeylElement::identity(b2.datum()), ParabolicType::empty(), TargetWalls::Full);
        assert!(matches!(
            sample_check_cell(&b2, &"0000".parse().unwrap(), &xb, f(101), 1, &mut rng),
            Err(Error::UnsupportedType(_))
        ));
    }

    #[test]
    fn single_relation_cells_detect_violations() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let t = tau("A2", "1,2,1");
        let d = t.datum();
        let x = FixedPoint::new(d, &elem(d, "1"), ParabolicType::empty(), TargetWalls::Full);
        for gamma in galleries_over(&t, &x) {
            let out = sample_check_cell(&t, &gamma, &x, f(101), 50, &mut rng).unwrap();
            assert!(out.pass, "{gamma}: {:?}", out.counterexample);
        }
    }
}
