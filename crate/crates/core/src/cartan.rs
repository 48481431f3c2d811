//! Finite root systems and their Weyl groups, in exact integer arithmetic.
//!
//! Conventions: the Cartan matrix entry `a[i][j]` is `<alpha_j, alpha_i^vee>`,
//! so the simple reflection `s_i` acts by `s_i(alpha_j) = alpha_j - a[i][j] alpha_i`.
//! Roots are integer vectors in the basis of simple roots. Simple indices are
//! 1-based in every public signature, following Bourbaki's labelling.
//!
//! A Weyl element is stored as the array of images of the simple roots. Words
//! are never used as the canonical form.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::ops::Neg;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest supported rank.
pub const MAX_RANK: usize = 8;

/// A root in simple-root coordinates. Also used for arbitrary integer vectors
/// during intermediate computations; membership in a root system is checked
/// by [`CartanDatum::is_root`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root {
    rank: u8,
    coeffs: [i32; MAX_RANK],
}

impl Root {
    pub fn from_coeffs(coeffs: &[i32]) -> Root {
        assert!(coeffs.len() <= MAX_RANK, "rank {} exceeds {MAX_RANK}", coeffs.len());
        let mut c = [0; MAX_RANK];
        c[..coeffs.len()].copy_from_slice(coeffs);
        Root { rank: coeffs.len() as u8, coeffs: c }
    }

    pub fn zero(rank: usize) -> Root {
        Root::from_coeffs(&vec![0; rank])
    }

    /// The simple root `alpha_i` (1-based).
    pub fn simple(rank: usize, i: usize) -> Root {
        let mut r = Root::zero(rank);
        r.coeffs[i - 1] = 1;
        r
    }

    pub fn rank(&self) -> usize {
        self.rank as usize
    }

    pub fn coeffs(&self) -> &[i32] {
        &self.coeffs[..self.rank as usize]
    }

    /// Coefficient of `alpha_i` (1-based).
    pub fn coeff(&self, i: usize) -> i32 {
        self.coeffs[i - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs().iter().all(|&c| c == 0)
    }

    pub fn is_positive(&self) -> bool {
        !self.is_zero() && self.coeffs().iter().all(|&c| c >= 0)
    }

    pub fn is_negative(&self) -> bool {
        !self.is_zero() && self.coeffs().iter().all(|&c| c <= 0)
    }

    /// The positive root of the pair `{self, -self}`.
    pub fn abs(&self) -> Root {
        if self.is_negative() {
            -*self
        } else {
            *self
        }
    }

    pub fn height(&self) -> i32 {
        self.coeffs().iter().sum()
    }

    /// Indices (1-based) with a nonzero coefficient.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs().iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, _)| i + 1)
    }

    /// `self + k * other`.
    pub fn add_scaled(&self, k: i32, other: &Root) -> Root {
        let mut r = *self;
        for i in 0..self.rank() {
            r.coeffs[i] += k * other.coeffs[i];
        }
        r
    }
}

impl Neg for Root {
    type Output = Root;

    fn neg(mut self) -> Root {
        for c in self.coeffs.iter_mut() {
            *c = -*c;
        }
        self
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs().iter().enumerate() {
            if c == 0 {
                continue;
            }
            if c < 0 {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            if c.abs() != 1 {
                write!(f, "{}", c.abs())?;
            }
            write!(f, "α{}", i + 1)?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Cartan-Killing family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }

    pub fn from_letter(c: char) -> Option<Family> {
        Some(match c.to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            _ => return None,
        })
    }

    /// Number of positive roots, or `None` for an invalid rank.
    pub fn positive_root_count(self, n: usize) -> Option<usize> {
        let valid = match self {
            Family::A => n >= 1,
            Family::B | Family::C => n >= 2,
            Family::D => n >= 4,
            Family::E => (6..=8).contains(&n),
            Family::F => n == 4,
            Family::G => n == 2,
        };
        if !valid || n > MAX_RANK {
            return None;
        }
        Some(match self {
            Family::A => n * (n + 1) / 2,
            Family::B | Family::C => n * n,
            Family::D => n * (n - 1),
            Family::E => [36, 63, 120][n - 6],
            Family::F => 24,
            Family::G => 6,
        })
    }
}

/// Cartan datum of a finite root system with its root closure.
#[derive(Clone, Debug)]
pub struct CartanDatum {
    family: Family,
    rank: usize,
    matrix: Vec<Vec<i32>>,
    roots: Vec<Root>,
    positive: Vec<Root>,
    index: HashMap<Root, usize>,
}

impl CartanDatum {
    pub fn new(family: Family, rank: usize) -> Result<CartanDatum> {
        let invalid = || Error::InvalidCartanType { family: family.letter(), rank };
        let expected = family.positive_root_count(rank).ok_or_else(invalid)?;
        let matrix = cartan_matrix(family, rank);
        let roots = root_closure(&matrix);
        if roots.len() != 2 * expected {
            return Err(Error::InvariantViolation(format!(
                "root closure of {}{} has {} roots, expected {}",
                family.letter(),
                rank,
                roots.len(),
                2 * expected
            )));
        }
        let index = roots.iter().enumerate().map(|(i, r)| (*r, i)).collect();
        let positive = roots.iter().filter(|r| r.is_positive()).copied().collect();
        Ok(CartanDatum { family, rank, matrix, roots, positive, index })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn name(&self) -> String {
        format!("{}{}", self.family.letter(), self.rank)
    }

    pub fn cartan_matrix(&self) -> &[Vec<i32>] {
        &self.matrix
    }

    /// `a[i][j] = <alpha_j, alpha_i^vee>`, 1-based.
    pub fn cartan_entry(&self, i: usize, j: usize) -> i32 {
        self.matrix[i - 1][j - 1]
    }

    /// All roots, sorted by height then coefficients.
    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive
    }

    pub fn is_root(&self, beta: &Root) -> bool {
        beta.rank() == self.rank && self.index.contains_key(beta)
    }

    pub fn root_id(&self, beta: &Root) -> Option<usize> {
        self.index.get(beta).copied()
    }

    pub fn simple_root(&self, i: usize) -> Root {
        Root::simple(self.rank, i)
    }

    pub fn check_letter(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.rank {
            return Err(Error::InvalidLetter { letter: i, rank: self.rank });
        }
        Ok(())
    }

    /// `s_i(beta)` for any integer vector; no membership check.
    pub(crate) fn reflect_vector(&self, i: usize, beta: &Root) -> Root {
        let row = &self.matrix[i - 1];
        let pairing: i32 = beta.coeffs().iter().zip(row).map(|(b, a)| b * a).sum();
        let mut r = *beta;
        r.coeffs[i - 1] -= pairing;
        r
    }

    /// `s_i(beta)` for a root `beta`.
    pub fn reflect(&self, i: usize, beta: &Root) -> Result<Root> {
        self.check_letter(i)?;
        if !self.is_root(beta) {
            return Err(Error::NotARoot(beta.to_string()));
        }
        Ok(self.reflect_vector(i, beta))
    }

    /// Positive roots of the sub-root-system generated by `t0`.
    pub fn parabolic_positive_roots(&self, t0: ParabolicType) -> Vec<Root> {
        self.positive.iter().filter(|r| r.support().all(|i| t0.contains(i))).copied().collect()
    }
}

fn cartan_matrix(family: Family, n: usize) -> Vec<Vec<i32>> {
    let mut a = vec![vec![0; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut link = |i: usize, j: usize| {
        a[i][j] = -1;
        a[j][i] = -1;
    };
    match family {
        Family::A | Family::B | Family::C | Family::F | Family::G => {
            for i in 0..n - 1 {
                link(i, i + 1);
            }
        }
        Family::D => {
            for i in 0..n - 2 {
                link(i, i + 1);
            }
            link(n - 3, n - 1);
        }
        Family::E => {
            link(0, 2);
            link(1, 3);
            for i in 2..n - 1 {
                link(i, i + 1);
            }
        }
    }
    // a[i][j] = <alpha_j, alpha_i^vee> is -2 or -3 when alpha_i is the short root.
    match family {
        Family::B => a[n - 1][n - 2] = -2,
        Family::C => a[n - 2][n - 1] = -2,
        Family::F => a[2][1] = -2,
        Family::G => a[0][1] = -3,
        _ => {}
    }
    a
}

fn root_closure(matrix: &[Vec<i32>]) -> Vec<Root> {
    let n = matrix.len();
    let reflect = |i: usize, beta: &Root| {
        let pairing: i32 = beta.coeffs().iter().zip(&matrix[i]).map(|(b, a)| b * a).sum();
        let mut r = *beta;
        r.coeffs[i] -= pairing;
        r
    };
    let mut seen: HashSet<Root> = HashSet::new();
    let mut queue: VecDeque<Root> = VecDeque::new();
    for i in 1..=n {
        let r = Root::simple(n, i);
        seen.insert(r);
        queue.push_back(r);
    }
    while let Some(beta) = queue.pop_front() {
        for i in 0..n {
            let image = reflect(i, &beta);
            if seen.insert(image) {
                queue.push_back(image);
            }
        }
    }
    let mut roots: Vec<Root> = seen.into_iter().collect();
    roots.sort_by_key(|r| (r.height(), *r));
    roots
}

/// A word in the simple reflections, 1-based letters, source-first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(letters: Vec<usize>) -> Word {
        Word(letters)
    }

    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn validate(&self, datum: &CartanDatum) -> Result<()> {
        self.0.iter().try_for_each(|&k| datum.check_letter(k))
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|k| k.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for Word {
    type Err = String;

    /// Comma-separated letters; the empty string and `e` denote the empty word.
    fn from_str(s: &str) -> std::result::Result<Word, String> {
        let s = s.trim();
        if s.is_empty() || s == "e" {
            return Ok(Word::empty());
        }
        s.split(',')
            .map(|t| {
                let t = t.trim();
                match t.parse::<usize>() {
                    Ok(k) if k >= 1 => Ok(k),
                    _ => Err(format!("invalid letter {t:?}")),
                }
            })
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(Word)
    }
}

/// A subset of the simple indices, the type of a standard parabolic subgroup.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct ParabolicType {
    mask: u16,
}

impl ParabolicType {
    pub fn empty() -> ParabolicType {
        ParabolicType { mask: 0 }
    }

    pub fn new(generators: impl IntoIterator<Item = usize>) -> ParabolicType {
        let mask = generators.into_iter().fold(0u16, |m, i| {
            assert!((1..=MAX_RANK).contains(&i), "simple index {i} out of range");
            m | (1 << (i - 1))
        });
        ParabolicType { mask }
    }

    pub fn contains(&self, i: usize) -> bool {
        (1..=16).contains(&i) && self.mask & (1 << (i - 1)) != 0
    }

    pub fn generators(&self) -> Vec<usize> {
        (1..=MAX_RANK).filter(|&i| self.contains(i)).collect()
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn validate(&self, datum: &CartanDatum) -> Result<()> {
        self.generators().into_iter().try_for_each(|i| datum.check_letter(i))
    }
}

impl fmt::Display for ParabolicType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.generators().iter().map(|k| k.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for ParabolicType {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<ParabolicType, String> {
        let word: Word = s.parse()?;
        if let Some(&k) = word.letters().iter().find(|&&k| k > MAX_RANK) {
            return Err(format!("simple index {k} out of range"));
        }
        Ok(ParabolicType::new(word.letters().iter().copied()))
    }
}

/// An element of the Weyl group, stored as the images of the simple roots.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeylElement {
    images: Vec<Root>,
    length: usize,
}

impl WeylElement {
    pub fn identity(datum: &CartanDatum) -> WeylElement {
        let images = (1..=datum.rank()).map(|i| datum.simple_root(i)).collect();
        WeylElement { images, length: 0 }
    }

    /// The simple reflection `s_i` (1-based).
    pub fn simple(datum: &CartanDatum, i: usize) -> WeylElement {
        WeylElement::identity(datum).times_simple(datum, i)
    }

    /// Product of the letters in source-first order: `s_{k_1} s_{k_2} ... s_{k_r}`.
    pub fn from_word(datum: &CartanDatum, word: &Word) -> Result<WeylElement> {
        word.validate(datum)?;
        Ok(word.letters().iter().fold(WeylElement::identity(datum), |w, &k| w.times_simple(datum, k)))
    }

    pub fn images(&self) -> &[Root] {
        &self.images
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn is_identity(&self) -> bool {
        self.length == 0
    }

    /// Image of an arbitrary integer vector under the linear action.
    pub fn apply(&self, beta: &Root) -> Root {
        let mut out = Root::zero(beta.rank());
        for (c, image) in beta.coeffs().iter().zip(&self.images) {
            if *c != 0 {
                out = out.add_scaled(*c, image);
            }
        }
        out
    }

    /// `w(alpha_i) < 0`, i.e. `l(w s_i) < l(w)`.
    pub fn has_right_descent(&self, i: usize) -> bool {
        self.images[i - 1].is_negative()
    }

    /// Right multiplication `w s_i`.
    pub fn times_simple(&self, datum: &CartanDatum, i: usize) -> WeylElement {
        let pivot = self.images[i - 1];
        let row = &datum.cartan_matrix()[i - 1];
        let images: Vec<Root> = self.images.iter().zip(row).map(|(img, &a)| img.add_scaled(-a, &pivot)).collect();
        let length = if pivot.is_positive() { self.length + 1 } else { self.length - 1 };
        WeylElement { images, length }
    }

    /// Left multiplication `s_i w`.
    pub fn simple_times(&self, datum: &CartanDatum, i: usize) -> WeylElement {
        let images = self.images.iter().map(|img| datum.reflect_vector(i, img)).collect();
        WeylElement::with_images(datum, images)
    }

    /// `self * other`.
    pub fn compose(&self, datum: &CartanDatum, other: &WeylElement) -> WeylElement {
        let images = other.images.iter().map(|img| self.apply(img)).collect();
        WeylElement::with_images(datum, images)
    }

    pub fn inverse(&self, datum: &CartanDatum) -> WeylElement {
        WeylElement::from_word(datum, &self.reduced_word(datum).reversed()).expect("letters of a reduced word are valid")
    }

    /// The element with the given simple-root images; the caller guarantees
    /// they come from a Weyl group element.
    pub(crate) fn from_images(datum: &CartanDatum, images: Vec<Root>) -> WeylElement {
        WeylElement::with_images(datum, images)
    }

    fn with_images(datum: &CartanDatum, images: Vec<Root>) -> WeylElement {
        let mut w = WeylElement { images, length: 0 };
        w.length = datum.positive_roots().iter().filter(|b| w.apply(b).is_negative()).count();
        w
    }

    /// `{pi > 0 : w^{-1}(pi) < 0}`, the walls separating `C` from `w(C)`.
    pub fn inversion_set(&self, datum: &CartanDatum) -> BTreeSet<Root> {
        datum
            .positive_roots()
            .iter()
            .map(|b| self.apply(b))
            .filter(|img| img.is_negative())
            .map(|img| -img)
            .collect()
    }

    /// A reduced word, built by peeling off the smallest right descent.
    pub fn reduced_word(&self, datum: &CartanDatum) -> Word {
        let mut letters = Vec::with_capacity(self.length);
        let mut current = self.clone();
        while current.length > 0 {
            let i = (1..=datum.rank()).find(|&i| current.has_right_descent(i)).expect("nonidentity element has a descent");
            current = current.times_simple(datum, i);
            letters.push(i);
        }
        letters.reverse();
        Word(letters)
    }

    /// A reduced word as text, `e` for the identity.
    pub fn label(&self, datum: &CartanDatum) -> String {
        if self.is_identity() {
            "e".to_string()
        } else {
            self.reduced_word(datum).to_string()
        }
    }
}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W{:?}", self.images)
    }
}

impl FromStr for CartanDatum {
    type Err = Error;

    /// Parses names such as `A3`, `B2`, `E8`.
    fn from_str(s: &str) -> Result<CartanDatum> {
        let s = s.trim();
        let mut chars = s.chars();
        let letter = chars.next().unwrap_or(' ');
        let rank: usize = chars.as_str().parse().unwrap_or(0);
        let family = Family::from_letter(letter).ok_or(Error::InvalidCartanType { family: letter, rank })?;
        CartanDatum::new(family, rank)
    }
}

pub fn build_cartan(family: Family, rank: usize) -> Result<CartanDatum> {
    CartanDatum::new(family, rank)
}

pub fn reflect(datum: &CartanDatum, i: usize, beta: &Root) -> Result<Root> {
    datum.reflect(i, beta)
}

pub fn weyl_from_word(datum: &CartanDatum, word: &Word) -> Result<WeylElement> {
    WeylElement::from_word(datum, word)
}

/// True when the product of `word` has length equal to the number of letters.
/// Words with letters outside the datum are not reduced.
pub fn is_reduced(datum: &CartanDatum, word: &Word) -> bool {
    match WeylElement::from_word(datum, word) {
        Ok(w) => w.length() == word.len(),
        Err(_) => false,
    }
}

/// Bruhat order by the lifting property: for a right descent `s` of `w`,
/// `u <= w` iff `us <= ws` when `s` is also a descent of `u`, and iff
/// `u <= ws` otherwise.
pub fn bruhat_leq(datum: &CartanDatum, u: &WeylElement, w: &WeylElement) -> bool {
    let mut u = u.clone();
    let mut w = w.clone();
    loop {
        if u.length() > w.length() {
            return false;
        }
        if w.is_identity() {
            return u.is_identity();
        }
        let s = (1..=datum.rank()).find(|&s| w.has_right_descent(s)).expect("nonidentity element has a descent");
        if u.has_right_descent(s) {
            u = u.times_simple(datum, s);
        }
        w = w.times_simple(datum, s);
    }
}

/// The element of minimal length in `w W_{T0}`.
pub fn min_coset_rep(datum: &CartanDatum, w: &WeylElement, t0: ParabolicType) -> WeylElement {
    let mut w = w.clone();
    while let Some(j) = t0.generators().into_iter().find(|&j| w.has_right_descent(j)) {
        w = w.times_simple(datum, j);
    }
    w
}

/// Every element below the product of a reduced word, as the set of products
/// of its subwords.
pub fn bruhat_interval_below(datum: &CartanDatum, word: &Word) -> Result<Vec<WeylElement>> {
    word.validate(datum)?;
    let mut seen: HashSet<WeylElement> = HashSet::new();
    let mut layer = vec![WeylElement::identity(datum)];
    seen.insert(layer[0].clone());
    for &k in word.letters() {
        let extended: Vec<WeylElement> = layer.iter().map(|v| v.times_simple(datum, k)).filter(|v| !seen.contains(v)).collect();
        for v in extended {
            if seen.insert(v.clone()) {
                layer.push(v);
            }
        }
    }
    Ok(layer)
}

/// Minimal coset representatives `u` with `u W_{T0} <= w W_{T0}`, sorted by
/// length and then by images.
pub fn coset_fixed_points(datum: &CartanDatum, word: &Word, t0: ParabolicType) -> Result<Vec<WeylElement>> {
    word.validate(datum)?;
    t0.validate(datum)?;
    if !is_reduced(datum, word) {
        return Err(Error::NonReducedWord(word.to_string()));
    }
    let mut reps: Vec<WeylElement> = bruhat_interval_below(datum, word)?
        .iter()
        .map(|v| min_coset_rep(datum, v, t0))
        .collect::<HashSet<_>>()
        .into_iter()
        .collect();
    sort_elements(&mut reps);
    Ok(reps)
}

pub fn sort_elements(elements: &mut [WeylElement]) {
    elements.sort_by(|a, b| (a.length(), a.images()).cmp(&(b.length(), b.images())));
}

/// All reduced words of length at most `max_len`, in lexicographic order by
/// length.
pub fn reduced_words(datum: &CartanDatum, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut frontier = vec![(Vec::new(), WeylElement::identity(datum))];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (letters, w) in &frontier {
            for k in 1..=datum.rank() {
                if !w.has_right_descent(k) {
                    let mut l: Vec<usize> = letters.clone();
                    l.push(k);
                    next.push((l, w.times_simple(datum, k)));
                }
            }
        }
        out.extend(next.iter().map(|(l, _)| Word::new(l.clone())));
        frontier = next;
    }
    out
}
