//! Periplectic Lie superalgebra matrices, the fake Casimir, and the tensor and graded functors.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::diagrams::canonical_word;
use crate::engine::Morphism;
use crate::superlin::{
    apply_at, op_add, op_compose, SpaceSignature, SuperOperator, SuperVector, SuperlinError,
};
use crate::word::{Gen, GenWord};

#[derive(Debug, Error)]
pub enum PnError {
    #[error("n must be at least 2, got {0}")]
    SmallN(u32),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Lin(#[from] SuperlinError),
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// A homogeneous element of gl(n|n) as a sparse matrix over the units
/// E_{rs}; rows and columns 0..n are the unprimed indices 1..n and rows
/// and columns n..2n the primed ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlElement {
    n: u32,
    entries: BTreeMap<(u32, u32), BigRational>,
}

impl GlElement {
    pub fn zero(n: u32) -> GlElement {
        GlElement { n, entries: BTreeMap::new() }
    }

    pub fn unit(n: u32, r: u32, s: u32) -> GlElement {
        assert!(r < 2 * n && s < 2 * n, "matrix index out of range");
        let mut x = GlElement::zero(n);
        x.add_unit(r, s, BigRational::one());
        x
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn entries(&self) -> &BTreeMap<(u32, u32), BigRational> {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add_unit(&mut self, r: u32, s: u32, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.entries.entry((r, s)).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.entries.remove(&(r, s));
        }
    }

    pub fn add_scaled(&mut self, other: &GlElement, c: &BigRational) {
        assert_eq!(self.n, other.n, "size mismatch");
        for (&(r, s), x) in &other.entries {
            self.add_unit(r, s, x * c);
        }
    }

    pub fn scale(&self, c: &BigRational) -> GlElement {
        let mut out = GlElement::zero(self.n);
        out.add_scaled(self, c);
        out
    }

    /// Parity of the unit E_{rs}: odd iff exactly one index is primed.
    fn unit_parity(&self, r: u32, s: u32) -> u8 {
        (((r >= self.n) as u8) + ((s >= self.n) as u8)) % 2
    }

    /// Common parity of all present units; zero element counts as even.
    pub fn parity(&self) -> u8 {
        let mut parity = None;
        for &(r, s) in self.entries.keys() {
            let p = self.unit_parity(r, s);
            match parity {
                None => parity = Some(p),
                Some(q) => assert_eq!(q, p, "inhomogeneous gl element"),
            }
        }
        parity.unwrap_or(0)
    }

    pub fn mul(&self, other: &GlElement) -> GlElement {
        assert_eq!(self.n, other.n, "size mismatch");
        let mut out = GlElement::zero(self.n);
        for (&(r, s), c) in &self.entries {
            for (&(_, t), x) in other.entries.range((s, 0)..(s + 1, 0)) {
                out.add_unit(r, t, c * x);
            }
        }
        out
    }

    /// The super bracket xy − (−1)^{x̄ȳ} yx.
    pub fn bracket(&self, other: &GlElement) -> GlElement {
        let sign = if self.parity() == 1 && other.parity() == 1 { rat(-1) } else { rat(1) };
        let mut out = self.mul(other);
        out.add_scaled(&other.mul(self), &-sign);
        out
    }

    /// tr(A) − tr(D) over the unprimed and primed diagonal blocks.
    pub fn supertrace(&self) -> BigRational {
        let mut acc = BigRational::zero();
        for r in 0..2 * self.n {
            if let Some(c) = self.entries.get(&(r, r)) {
                if r < self.n {
                    acc += c.clone();
                } else {
                    acc -= c.clone();
                }
            }
        }
        acc
    }
}

impl fmt::Display for GlElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "0");
        }
        let name = |r: u32| {
            if r < self.n {
                format!("{}", r + 1)
            } else {
                format!("{}'", r - self.n + 1)
            }
        };
        for (i, (&(r, s), c)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*E({},{})", name(r), name(s))?;
        }
        Ok(())
    }
}

fn unprimed(i: u32) -> u32 {
    i - 1
}

fn primed(n: u32, i: u32) -> u32 {
    n + i - 1
}

/// A^±_{ij} = E_{ij} ± E_{j'i'}, even.
pub fn a_elem(n: u32, i: u32, j: u32, plus: bool) -> GlElement {
    let mut x = GlElement::unit(n, unprimed(i), unprimed(j));
    x.add_unit(primed(n, j), primed(n, i), if plus { rat(1) } else { rat(-1) });
    x
}

/// B^±_{ij} = E_{ij'} ± E_{ji'}, odd.
pub fn b_elem(n: u32, i: u32, j: u32, plus: bool) -> GlElement {
    let mut x = GlElement::unit(n, unprimed(i), primed(n, j));
    x.add_unit(unprimed(j), primed(n, i), if plus { rat(1) } else { rat(-1) });
    x
}

/// C^±_{ij} = E_{i'j} ± E_{j'i}, odd.
pub fn c_elem(n: u32, i: u32, j: u32, plus: bool) -> GlElement {
    let mut x = GlElement::unit(n, primed(n, i), unprimed(j));
    x.add_unit(primed(n, j), unprimed(i), if plus { rat(1) } else { rat(-1) });
    x
}

/// str(xy), the invariant odd-form pairing used to build dual bases.
pub fn supertrace_form(x: &GlElement, y: &GlElement) -> BigRational {
    x.mul(y).supertrace()
}

/// The basis {A⁻_{ij}} ∪ {B⁺_{i≤j}} ∪ {C⁻_{i<j}} of p(n), size 2n².
pub fn pn_basis(n: u32) -> Result<Vec<GlElement>, PnError> {
    if n < 2 {
        return Err(PnError::SmallN(n));
    }
    let mut basis = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            basis.push(a_elem(n, i, j, false));
        }
    }
    for i in 1..=n {
        for j in i..=n {
            basis.push(b_elem(n, i, j, true));
        }
    }
    for i in 1..=n {
        for j in i + 1..=n {
            basis.push(c_elem(n, i, j, false));
        }
    }
    Ok(basis)
}

/// Names aligned with pn_basis, for report witnesses.
pub fn pn_basis_names(n: u32) -> Vec<String> {
    let mut names = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            names.push(format!("A-({i},{j})"));
        }
    }
    for i in 1..=n {
        for j in i..=n {
            names.push(format!("B+({i},{j})"));
        }
    }
    for i in 1..=n {
        for j in i + 1..=n {
            names.push(format!("C-({i},{j})"));
        }
    }
    names
}

/// The dual basis in gl(n|n) aligned index-wise with pn_basis.
pub fn dual_basis(n: u32) -> Result<Vec<GlElement>, PnError> {
    if n < 2 {
        return Err(PnError::SmallN(n));
    }
    let half = BigRational::new(1.into(), 2.into());
    let quarter = BigRational::new(1.into(), 4.into());
    let mut duals = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            duals.push(a_elem(n, j, i, true).scale(&half));
        }
    }
    for i in 1..=n {
        for j in i..=n {
            if i == j {
                duals.push(c_elem(n, i, i, true).scale(&-quarter.clone()));
            } else {
                duals.push(c_elem(n, j, i, true).scale(&-half.clone()));
            }
        }
    }
    for i in 1..=n {
        for j in i + 1..=n {
            duals.push(b_elem(n, j, i, false).scale(&half));
        }
    }
    Ok(duals)
}

/// The fake Casimir Ω = Σ x ⊗ x* as an explicit list of summands
/// (x, x*, coefficient); every summand pairs elements of equal parity,
/// so Ω is even.
pub fn omega_summands(n: u32) -> Result<Vec<(GlElement, GlElement, BigRational)>, PnError> {
    if n < 2 {
        return Err(PnError::SmallN(n));
    }
    let half = BigRational::new(1.into(), 2.into());
    let mut sum = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            sum.push((a_elem(n, i, j, false), a_elem(n, j, i, true), rat(1)));
        }
    }
    for i in 1..=n {
        sum.push((b_elem(n, i, i, true), c_elem(n, i, i, true), -half.clone()));
    }
    for i in 1..=n {
        for j in i + 1..=n {
            sum.push((b_elem(n, i, j, true), c_elem(n, j, i, true), rat(-1)));
        }
    }
    for i in 1..=n {
        for j in i + 1..=n {
            sum.push((c_elem(n, i, j, false), b_elem(n, j, i, false), rat(1)));
        }
    }
    Ok(sum)
}

/// Basis label of V = C^{n|n}: v1..vn even, v1'..vn' odd.
pub fn v_label(n: u32, idx: u32) -> String {
    if idx < n {
        format!("v{}", idx + 1)
    } else {
        format!("v{}'", idx - n + 1)
    }
}

pub fn v_parity(n: u32, idx: u32) -> u8 {
    (idx >= n) as u8
}

/// Signature of V^{⊗k}.
pub fn v_signature(n: u32, k: usize) -> SpaceSignature {
    let factor: Vec<(String, u8)> = (0..2 * n).map(|i| (v_label(n, i), v_parity(n, i))).collect();
    SpaceSignature::new(vec![factor; k])
}

/// The superswap on V⊗V.
pub fn sigma_op(n: u32) -> SuperOperator {
    let vv = v_signature(n, 2);
    let mut op = SuperOperator::new(vv.clone(), vv, 0);
    for a in 0..2 * n {
        for b in 0..2 * n {
            let sign = if v_parity(n, a) == 1 && v_parity(n, b) == 1 { rat(-1) } else { rat(1) };
            op.add_entry(vec![a, b], vec![b, a], sign);
        }
    }
    op
}

/// The odd evaluation V⊗V → C pairing v_i with v_{i'} symmetrically.
pub fn beta_op(n: u32) -> SuperOperator {
    let vv = v_signature(n, 2);
    let mut op = SuperOperator::new(vv, SpaceSignature::scalar(), 1);
    for i in 0..n {
        op.add_entry(vec![i, n + i], vec![], rat(1));
        op.add_entry(vec![n + i, i], vec![], rat(1));
    }
    op
}

/// The odd coevaluation C → V⊗V, 1 ↦ Σ_i (v_i⊗v_{i'} − v_{i'}⊗v_i).
pub fn beta_star_op(n: u32) -> SuperOperator {
    let vv = v_signature(n, 2);
    let mut op = SuperOperator::new(SpaceSignature::scalar(), vv, 1);
    for i in 0..n {
        op.add_entry(vec![], vec![i, n + i], rat(1));
        op.add_entry(vec![], vec![n + i, i], rat(-1));
    }
    op
}

/// A gl(n|n) element as an operator on one copy of V.
pub fn gl_to_v_op(x: &GlElement) -> SuperOperator {
    let v = v_signature(x.n(), 1);
    let mut op = SuperOperator::new(v.clone(), v, x.parity());
    for (&(r, s), c) in x.entries() {
        op.add_entry(vec![s], vec![r], c.clone());
    }
    op
}

/// Ω acting on factors u < w of the tensor space described by sig.
pub fn omega_between(
    n: u32,
    u: usize,
    w: usize,
    sig: &SpaceSignature,
) -> Result<SuperOperator, PnError> {
    assert!(u < w, "factor order");
    let mut acc = SuperOperator::new(sig.clone(), sig.clone(), 0);
    for (x, xstar, c) in omega_summands(n)? {
        let at_w = apply_at(&gl_to_v_op(&xstar), w, sig)?;
        let at_u = apply_at(&gl_to_v_op(&x), u, sig)?;
        acc = op_add(&acc, &op_compose(&at_u, &at_w)?.scale(&c))?;
    }
    Ok(acc)
}

fn psi_gen(
    g: Gen,
    st: u32,
    n: u32,
    m: usize,
    sigma: &SuperOperator,
) -> Result<SuperOperator, PnError> {
    let sig = v_signature(n, m + st as usize);
    match g {
        Gen::S(i) => Ok(apply_at(sigma, m + i as usize - 1, &sig)?),
        Gen::B(i) => Ok(apply_at(&beta_op(n), m + i as usize - 1, &sig)?),
        Gen::BStar(i) => Ok(apply_at(&beta_star_op(n), m + i as usize - 1, &sig)?),
        Gen::Y(k) => {
            let w = m + k as usize - 1;
            let mut acc = SuperOperator::new(sig.clone(), sig.clone(), 0);
            for u in 0..w {
                acc = op_add(&acc, &omega_between(n, u, w, &sig)?)?;
            }
            Ok(acc)
        }
    }
}

/// The tensor functor on a word: s ↦ superswap, b ↦ evaluation,
/// b* ↦ coevaluation, y_k ↦ Σ_{u<k} Ω acting between the module factors
/// V^{⊗m} and the k-th tensor factor; m = 0 gives y₁ ↦ 0.
pub fn psi_word(w: &GenWord, n: u32, m: usize) -> Result<SuperOperator, PnError> {
    psi_word_with_sigma(w, n, m, &sigma_op(n))
}

/// As psi_word, but with the crossing image supplied by the caller.
pub fn psi_word_with_sigma(
    w: &GenWord,
    n: u32,
    m: usize,
    sigma: &SuperOperator,
) -> Result<SuperOperator, PnError> {
    if n < 2 {
        return Err(PnError::SmallN(n));
    }
    let mut acc = SuperOperator::identity(v_signature(n, m + w.source() as usize));
    let mut st = w.source();
    for g in w.gens().iter().rev() {
        acc = op_compose(&psi_gen(*g, st, n, m, sigma)?, &acc)?;
        st = g.apply_from_below(st).expect("validated word");
    }
    Ok(acc)
}

/// The tensor functor on a morphism with coefficients specialized at ħ=1.
pub fn psi_morphism(mor: &Morphism, n: u32, m: usize) -> Result<SuperOperator, PnError> {
    let source = v_signature(n, m + mor.a() as usize);
    let target = v_signature(n, m + mor.b() as usize);
    let parity = ((mor.a() + mor.b()) / 2 + mor.a()) % 2;
    let mut acc = SuperOperator::new(source, target, parity as u8);
    let one = BigRational::one();
    for (d, poly) in mor.terms() {
        let c = poly.eval(&one);
        if c.is_zero() {
            continue;
        }
        let op = psi_word(&canonical_word(d), n, m)?;
        acc = op_add(&acc, &op.scale(&c))?;
    }
    Ok(acc)
}

/// A monomial of Λ(g₁) ⊗ S(n₊): a sorted set of exterior generators
/// indexed by pairs i ≤ j and a sorted multiset of symmetric generators
/// indexed by pairs i < j.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GradedMonomial {
    bset: Vec<(u32, u32)>,
    amult: Vec<(u32, u32)>,
}

impl GradedMonomial {
    pub fn one() -> GradedMonomial {
        GradedMonomial { bset: Vec::new(), amult: Vec::new() }
    }

    pub fn new(mut bset: Vec<(u32, u32)>, mut amult: Vec<(u32, u32)>) -> GradedMonomial {
        bset.sort();
        amult.sort();
        for w in bset.windows(2) {
            assert_ne!(w[0], w[1], "repeated exterior generator");
        }
        for &(i, j) in &bset {
            assert!(i <= j, "exterior generator index order");
        }
        for &(i, j) in &amult {
            assert!(i < j, "symmetric generator index order");
        }
        GradedMonomial { bset, amult }
    }

    pub fn degree(&self) -> usize {
        self.bset.len() + self.amult.len()
    }

    pub fn parity(&self) -> u8 {
        (self.bset.len() % 2) as u8
    }

    pub fn bset(&self) -> &[(u32, u32)] {
        &self.bset
    }

    pub fn amult(&self) -> &[(u32, u32)] {
        &self.amult
    }

    /// Multiply by the symmetric generator indexed (i, j), i < j.
    pub fn mul_a(&self, i: u32, j: u32) -> GradedMonomial {
        let mut amult = self.amult.clone();
        let pos = amult.partition_point(|&g| g < (i, j));
        amult.insert(pos, (i, j));
        GradedMonomial { bset: self.bset.clone(), amult }
    }

    /// Multiply from the left by the exterior generator indexed (i, j),
    /// i ≤ j: zero on repeats, sign from the sorted insertion position.
    pub fn mul_b(&self, i: u32, j: u32) -> Option<(i8, GradedMonomial)> {
        let pos = self.bset.partition_point(|&g| g < (i, j));
        if self.bset.get(pos) == Some(&(i, j)) {
            return None;
        }
        let mut bset = self.bset.clone();
        bset.insert(pos, (i, j));
        let sign = if pos % 2 == 0 { 1 } else { -1 };
        Some((sign, GradedMonomial { bset, amult: self.amult.clone() }))
    }

    pub fn label(&self) -> String {
        if self.degree() == 0 {
            return "1".to_string();
        }
        let mut parts: Vec<String> =
            self.bset.iter().map(|&(i, j)| format!("b({i},{j})")).collect();
        parts.extend(self.amult.iter().map(|&(i, j)| format!("a({i},{j})")));
        parts.join("*")
    }
}

impl fmt::Display for GradedMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// An element of the graded module G = Λ(g₁) ⊗ S(n₊).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedElement {
    n: u32,
    terms: BTreeMap<GradedMonomial, BigRational>,
}

impl GradedElement {
    pub fn zero(n: u32) -> GradedElement {
        GradedElement { n, terms: BTreeMap::new() }
    }

    pub fn one(n: u32) -> GradedElement {
        let mut x = GradedElement::zero(n);
        x.add_term(GradedMonomial::one(), BigRational::one());
        x
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<GradedMonomial, BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, mono: GradedMonomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(mono.clone()).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&mono);
        }
    }

    pub fn coeff(&self, mono: &GradedMonomial) -> BigRational {
        self.terms.get(mono).cloned().unwrap_or_else(BigRational::zero)
    }
}

impl fmt::Display for GradedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*{m}")?;
        }
        Ok(())
    }
}

/// A 0-slot multiplier of the graded functor's dot image.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlotGen {
    /// Multiplication by the symmetric generator (i, j), i < j.
    A(u32, u32),
    /// Left exterior multiplication by (i, j), i ≤ j.
    B(u32, u32),
}

impl SlotGen {
    pub fn parity(&self) -> u8 {
        match self {
            SlotGen::A(_, _) => 0,
            SlotGen::B(_, _) => 1,
        }
    }

    pub fn apply(&self, m: &GradedMonomial) -> Option<(i8, GradedMonomial)> {
        match *self {
            SlotGen::A(i, j) => Some((1, m.mul_a(i, j))),
            SlotGen::B(i, j) => m.mul_b(i, j),
        }
    }
}

/// Summands of the graded functor's image of a dot: the 0-slot multiplier,
/// the gl(n|n) matrix acting on the dotted tensor factor, and the scalar.
pub fn phi_y_summands(n: u32) -> Result<Vec<(SlotGen, GlElement, BigRational)>, PnError> {
    if n < 2 {
        return Err(PnError::SmallN(n));
    }
    let half = BigRational::new(1.into(), 2.into());
    let mut sum = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            sum.push((SlotGen::A(i, j), a_elem(n, j, i, true), rat(1)));
        }
    }
    for i in 1..=n {
        sum.push((SlotGen::B(i, i), c_elem(n, i, i, true), -half.clone()));
    }
    for i in 1..=n {
        for j in i + 1..=n {
            sum.push((SlotGen::B(i, j), c_elem(n, j, i, true), rat(-1)));
        }
    }
    Ok(sum)
}

fn sorted_subsets(gens: &[(u32, u32)], max: usize) -> Vec<Vec<(u32, u32)>> {
    let mut out = vec![Vec::new()];
    for &g in gens {
        let mut extra = Vec::new();
        for s in &out {
            if s.len() < max {
                let mut s2 = s.clone();
                s2.push(g);
                extra.push(s2);
            }
        }
        out.extend(extra);
    }
    out
}

fn sorted_multisets(gens: &[(u32, u32)], max: usize) -> Vec<Vec<(u32, u32)>> {
    fn rec(gens: &[(u32, u32)], max: usize, acc: &mut Vec<(u32, u32)>, out: &mut Vec<Vec<(u32, u32)>>) {
        out.push(acc.clone());
        if acc.len() == max {
            return;
        }
        for (t, &g) in gens.iter().enumerate() {
            acc.push(g);
            rec(&gens[t..], max, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(gens, max, &mut Vec::new(), &mut out);
    out
}

fn b_generators(n: u32) -> Vec<(u32, u32)> {
    let mut gens = Vec::new();
    for i in 1..=n {
        for j in i..=n {
            gens.push((i, j));
        }
    }
    gens
}

fn a_generators(n: u32) -> Vec<(u32, u32)> {
    let mut gens = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            gens.push((i, j));
        }
    }
    gens
}

/// All monomials of G of degree at most dcap, in a fixed order.
pub fn graded_monomials(n: u32, dcap: u32) -> Vec<GradedMonomial> {
    let bgens = b_generators(n);
    let agens = a_generators(n);
    let mut out = Vec::new();
    for bset in sorted_subsets(&bgens, dcap as usize) {
        for amult in sorted_multisets(&agens, dcap as usize - bset.len()) {
            out.push(GradedMonomial::new(bset.clone(), amult));
        }
    }
    out.sort();
    out
}

/// Signature of G_{≤dcap} ⊗ V^{⊗k}.
pub fn phi_signature(n: u32, k: usize, dcap: u32) -> SpaceSignature {
    let monos = graded_monomials(n, dcap);
    let mut factors = vec![monos.iter().map(|m| (m.label(), m.parity())).collect::<Vec<_>>()];
    factors.extend(v_signature(n, k).factors().to_vec());
    SpaceSignature::new(factors)
}

fn slot_gen_op(g: &SlotGen, monos: &[GradedMonomial], dcap: u32) -> SuperOperator {
    let factor: Vec<(String, u8)> = monos.iter().map(|m| (m.label(), m.parity())).collect();
    let sig = SpaceSignature::new(vec![factor]);
    let mut op = SuperOperator::new(sig.clone(), sig, g.parity());
    for (idx, m) in monos.iter().enumerate() {
        if let Some((sign, m2)) = g.apply(m) {
            if m2.degree() <= dcap as usize {
                let pos = monos.binary_search(&m2).expect("closed under multiplication") as u32;
                op.add_entry(vec![idx as u32], vec![pos], rat(sign as i64));
            }
        }
    }
    op
}

fn phi_gen(g: Gen, st: u32, n: u32, dcap: u32, monos: &[GradedMonomial]) -> Result<SuperOperator, PnError> {
    let sig = phi_signature(n, st as usize, dcap);
    match g {
        Gen::S(i) => Ok(apply_at(&sigma_op(n), i as usize, &sig)?),
        Gen::B(i) => Ok(apply_at(&beta_op(n), i as usize, &sig)?),
        Gen::BStar(i) => Ok(apply_at(&beta_star_op(n), i as usize, &sig)?),
        Gen::Y(k) => {
            let mut acc = SuperOperator::new(sig.clone(), sig.clone(), 0);
            for (slot, xstar, c) in phi_y_summands(n)? {
                let at_k = apply_at(&gl_to_v_op(&xstar), k as usize, &sig)?;
                let at_0 = apply_at(&slot_gen_op(&slot, monos, dcap), 0, &sig)?;
                acc = op_add(&acc, &op_compose(&at_0, &at_k)?.scale(&c))?;
            }
            Ok(acc)
        }
    }
}

/// The graded functor on a word as an operator on G_{≤dcap} ⊗ V^{⊗a}:
/// s, b, b* act on the tensor factors, a dot acts by the 0-and-k placed
/// summand pairs; every dot raises the 0-slot degree by exactly one, so
/// dcap at least the dot count loses nothing.
pub fn phi_word(w: &GenWord, n: u32, dcap: u32) -> Result<SuperOperator, PnError> {
    if n < 2 {
        return Err(PnError::SmallN(n));
    }
    if (dcap as usize) < w.gens().iter().filter(|g| matches!(g, Gen::Y(_))).count() {
        return Err(PnError::Invalid("degree cap below the dot count".to_string()));
    }
    let monos = graded_monomials(n, dcap);
    let mut acc = SuperOperator::identity(phi_signature(n, w.source() as usize, dcap));
    let mut st = w.source();
    for g in w.gens().iter().rev() {
        acc = op_compose(&phi_gen(*g, st, n, dcap, &monos)?, &acc)?;
        st = g.apply_from_below(st).expect("validated word");
    }
    Ok(acc)
}

/// The graded functor on a morphism with coefficients specialized at ħ=0.
pub fn phi_morphism(mor: &Morphism, n: u32, dcap: u32) -> Result<SuperOperator, PnError> {
    let source = phi_signature(n, mor.a() as usize, dcap);
    let target = phi_signature(n, mor.b() as usize, dcap);
    let parity = ((mor.a() + mor.b()) / 2 + mor.a()) % 2;
    let mut acc = SuperOperator::new(source, target, parity as u8);
    let zero = BigRational::zero();
    for (d, poly) in mor.terms() {
        let c = poly.eval(&zero);
        if c.is_zero() {
            continue;
        }
        let op = phi_word(&canonical_word(d), n, dcap)?;
        acc = op_add(&acc, &op.scale(&c))?;
    }
    Ok(acc)
}

/// A basis state of G ⊗ V^{⊗k} for sparse evaluation: the 0-slot monomial
/// and the V-factor label indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PhiState {
    pub mono: GradedMonomial,
    pub labels: Vec<u32>,
}

/// A sparse vector of G ⊗ V^{⊗k} basis states.
pub type PhiVector = BTreeMap<PhiState, BigRational>;

fn phi_vec_add(v: &mut PhiVector, state: PhiState, c: BigRational) {
    if c.is_zero() {
        return;
    }
    let slot = v.entry(state.clone()).or_insert_with(BigRational::zero);
    *slot += c;
    if slot.is_zero() {
        v.remove(&state);
    }
}

fn label_prefix_parity(n: u32, labels: &[u32]) -> u8 {
    (labels.iter().map(|&l| v_parity(n, l) as u32).sum::<u32>() % 2) as u8
}

/// Applies the graded functor's image of a word to a sparse start vector
/// without materializing operators. The keep callback sees the word index
/// of the letter just applied and each produced state; returning false
/// drops the state, which is sound whenever dropped states cannot
/// contribute to the coefficients eventually read off.
pub fn phi_apply_word(
    w: &GenWord,
    n: u32,
    dcap: u32,
    start: PhiVector,
    mut keep: impl FnMut(usize, &PhiState) -> bool,
) -> Result<PhiVector, PnError> {
    if n < 2 {
        return Err(PnError::SmallN(n));
    }
    let summands = phi_y_summands(n)?;
    let mut states = start;
    let mut st = w.source();
    for (widx, g) in w.gens().iter().enumerate().rev() {
        let mut next: PhiVector = BTreeMap::new();
        for (state, c) in &states {
            assert_eq!(state.labels.len(), st as usize, "state arity mismatch");
            match *g {
                Gen::S(i) => {
                    let (p, q) = (state.labels[i as usize - 1], state.labels[i as usize]);
                    let sign = if v_parity(n, p) == 1 && v_parity(n, q) == 1 { rat(-1) } else { rat(1) };
                    let mut labels = state.labels.clone();
                    labels.swap(i as usize - 1, i as usize);
                    let s2 = PhiState { mono: state.mono.clone(), labels };
                    if keep(widx, &s2) {
                        phi_vec_add(&mut next, s2, c * sign);
                    }
                }
                Gen::B(i) => {
                    let (p, q) = (state.labels[i as usize - 1], state.labels[i as usize]);
                    if p % n == q % n && v_parity(n, p) != v_parity(n, q) {
                        let prefix = (state.mono.parity()
                            + label_prefix_parity(n, &state.labels[..i as usize - 1]))
                            % 2;
                        let sign = if prefix == 1 { rat(-1) } else { rat(1) };
                        let mut labels = state.labels.clone();
                        labels.drain(i as usize - 1..=i as usize);
                        let s2 = PhiState { mono: state.mono.clone(), labels };
                        if keep(widx, &s2) {
                            phi_vec_add(&mut next, s2, c * sign);
                        }
                    }
                }
                Gen::BStar(i) => {
                    let prefix = (state.mono.parity()
                        + label_prefix_parity(n, &state.labels[..i as usize - 1]))
                        % 2;
                    let outer = if prefix == 1 { rat(-1) } else { rat(1) };
                    for t in 0..n {
                        for (first, second, sgn) in
                            [(t, n + t, rat(1)), (n + t, t, rat(-1))]
                        {
                            let mut labels = state.labels.clone();
                            labels.insert(i as usize - 1, second);
                            labels.insert(i as usize - 1, first);
                            let s2 = PhiState { mono: state.mono.clone(), labels };
                            if keep(widx, &s2) {
                                phi_vec_add(&mut next, s2, c * &outer * sgn);
                            }
                        }
                    }
                }
                Gen::Y(k) => {
                    let label = state.labels[k as usize - 1];
                    let prefix = (state.mono.parity()
                        + label_prefix_parity(n, &state.labels[..k as usize - 1]))
                        % 2;
                    for (slot, xstar, coeff) in &summands {
                        let koszul = if xstar.parity() == 1 && prefix == 1 { rat(-1) } else { rat(1) };
                        for (&(r, s), x) in xstar.entries() {
                            if s != label {
                                continue;
                            }
                            let Some((msign, mono)) = slot.apply(&state.mono) else {
                                continue;
                            };
                            if mono.degree() > dcap as usize {
                                continue;
                            }
                            let mut labels = state.labels.clone();
                            labels[k as usize - 1] = r;
                            let s2 = PhiState { mono, labels };
                            if keep(widx, &s2) {
                                phi_vec_add(
                                    &mut next,
                                    s2,
                                    c * coeff * x * &koszul * rat(msign as i64),
                                );
                            }
                        }
                    }
                }
            }
        }
        states = next;
        st = g.apply_from_below(st).expect("validated word");
    }
    debug_assert_eq!(st, w.target());
    Ok(states)
}

/// Converts a sparse state vector into a SuperVector over the matching
/// materialized signature, for cross-checks at small n.
pub fn phi_vector_to_super(v: &PhiVector, n: u32, k: usize, dcap: u32) -> SuperVector {
    let monos = graded_monomials(n, dcap);
    let sig = phi_signature(n, k, dcap);
    let mut out = SuperVector::zero(sig);
    for (state, c) in v {
        let idx = monos.binary_search(&state.mono).expect("monomial within cap") as u32;
        let mut tuple = vec![idx];
        tuple.extend_from_slice(&state.labels);
        out.add_entry(tuple, c.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::normal_form;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn word(source: u32, text: &str) -> GenWord {
        GenWord::parse(text, source).unwrap()
    }

    #[test]
    fn basis_sizes_parities_and_sample_entries() {
        assert!(pn_basis(1).is_err());
        for n in 2..=4u32 {
            let basis = pn_basis(n).unwrap();
            assert_eq!(basis.len(), (2 * n * n) as usize);
            assert_eq!(pn_basis_names(n).len(), basis.len());
        }
        let basis = pn_basis(2).unwrap();
        assert_eq!(basis.len(), 8);
        let a12 = a_elem(2, 1, 2, false);
        assert_eq!(a12.entries().get(&(0, 1)), Some(&rat(1)));
        assert_eq!(a12.entries().get(&(3, 2)), Some(&rat(-1)));
        assert_eq!(a12.parity(), 0);
        assert_eq!(b_elem(2, 1, 2, true).parity(), 1);
        assert_eq!(c_elem(2, 1, 2, false).parity(), 1);
    }

    #[test]
    fn supertrace_examples_and_invariance() {
        let n = 2;
        let mut id = GlElement::zero(n);
        for r in 0..2 * n {
            id.add_unit(r, r, rat(1));
        }
        assert_eq!(id.supertrace(), rat(0));
        let e11 = GlElement::unit(n, 0, 0);
        assert_eq!(supertrace_form(&e11, &e11), rat(1));
        let half_a_plus = a_elem(n, 2, 1, true).scale(&BigRational::new(1.into(), 2.into()));
        assert_eq!(supertrace_form(&half_a_plus, &a_elem(n, 1, 2, false)), rat(1));

        let basis = pn_basis(n).unwrap();
        for x in &basis {
            for y in &basis {
                for z in &basis {
                    assert_eq!(
                        supertrace_form(&x.bracket(y), z),
                        supertrace_form(x, &y.bracket(z))
                    );
                }
            }
        }
    }

    #[test]
    fn dual_basis_pairs_to_identity() {
        for n in 2..=4u32 {
            let basis = pn_basis(n).unwrap();
            let duals = dual_basis(n).unwrap();
            for (i, xstar) in duals.iter().enumerate() {
                for (j, y) in basis.iter().enumerate() {
                    let expected = if i == j { rat(1) } else { rat(0) };
                    assert_eq!(supertrace_form(xstar, y), expected, "n={n} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn omega_is_superswap_plus_coevaluation_pairing() {
        for n in 2..=3u32 {
            let summands = omega_summands(n).unwrap();
            if n == 2 {
                assert_eq!(summands.len(), 8);
            }
            for (x, xstar, _) in &summands {
                assert_eq!(x.parity(), xstar.parity());
            }
            let vv = v_signature(n, 2);
            let omega = omega_between(n, 0, 1, &vv).unwrap();
            let expected = op_add(
                &sigma_op(n),
                &op_compose(&beta_star_op(n), &beta_op(n)).unwrap(),
            )
            .unwrap();
            assert_eq!(omega, expected);
            for a in 0..n {
                for b in 0..n {
                    let out = omega.apply(&SuperVector::basis(vv.clone(), vec![a, b]));
                    assert_eq!(out, SuperVector::basis(vv.clone(), vec![b, a]));
                }
            }
        }
    }

    #[test]
    fn fake_casimir_commutes_with_the_diagonal_action() {
        for n in 2..=3u32 {
            let vv = v_signature(n, 2);
            let omega = omega_between(n, 0, 1, &vv).unwrap();
            for x in pn_basis(n).unwrap() {
                let local = gl_to_v_op(&x);
                let diag = op_add(
                    &apply_at(&local, 0, &vv).unwrap(),
                    &apply_at(&local, 1, &vv).unwrap(),
                )
                .unwrap();
                let lhs = op_compose(&diag, &omega).unwrap();
                let rhs = op_compose(&omega, &diag).unwrap();
                assert_eq!(lhs, rhs, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn omega_conjugates_along_superswaps() {
        let n = 2;
        let v3 = v_signature(n, 3);
        let s1 = apply_at(&sigma_op(n), 1, &v3).unwrap();
        let lhs = omega_between(n, 0, 2, &v3).unwrap();
        let rhs = op_compose(&op_compose(&s1, &omega_between(n, 0, 1, &v3).unwrap()).unwrap(), &s1)
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn tensor_functor_generator_images() {
        let n = 2;
        let vv = v_signature(n, 2);
        let swap = psi_word(&word(2, "s1"), n, 0).unwrap();
        let out = swap.apply(&SuperVector::basis(vv.clone(), vec![n, n + 1]));
        let mut expected = SuperVector::zero(vv.clone());
        expected.add_entry(vec![n + 1, n], rat(-1));
        assert_eq!(out, expected);

        let untwist = psi_word(&word(1, "b2 b1*"), n, 0).unwrap();
        assert_eq!(untwist, SuperOperator::identity(v_signature(n, 1)));

        let y1 = psi_word(&word(1, "y1"), n, 1).unwrap();
        let expected = op_add(
            &sigma_op(n),
            &op_compose(&beta_star_op(n), &beta_op(n)).unwrap(),
        )
        .unwrap();
        assert_eq!(y1, expected);

        let y1_trivial = psi_word(&word(1, "y1"), n, 0).unwrap();
        assert!(y1_trivial.is_zero());
    }

    #[test]
    fn dot_images_commute() {
        for (n, m, a) in [(2, 0, 3), (2, 1, 2), (3, 1, 2)] {
            let mut ys = Vec::new();
            for k in 1..=a {
                ys.push(psi_word(&word(a, &format!("y{k}")), n, m).unwrap());
            }
            for p in 0..ys.len() {
                for q in p + 1..ys.len() {
                    assert_eq!(
                        op_compose(&ys[p], &ys[q]).unwrap(),
                        op_compose(&ys[q], &ys[p]).unwrap(),
                        "n={n} m={m} a={a} p={p} q={q}"
                    );
                }
            }
        }
    }

    #[test]
    fn functor_image_parity_matches_diagram_parity() {
        for d in crate::diagrams::enumerate_basis(2, 2, 1) {
            let op = psi_word(&canonical_word(&d), 2, 0).unwrap();
            assert_eq!(op.parity(), d.parity());
        }
        for d in crate::diagrams::enumerate_basis(3, 1, 0) {
            let op = psi_word(&canonical_word(&d), 2, 1).unwrap();
            assert_eq!(op.parity(), d.parity());
        }
    }

    #[test]
    fn tensor_functor_respects_normalization() {
        let n = 2;
        let cases = [
            (1, "b1 s2 y2 s2 b1*", 0),
            (2, "s1 y1 s1", 0),
            (2, "s1 y2 s1 y1", 1),
            (3, "b2 s1 y2", 1),
            (1, "y1 y1", 1),
        ];
        for (source, text, m) in cases {
            let w = word(source, text);
            let direct = psi_word(&w, n, m).unwrap();
            let via_nf = psi_morphism(&normal_form(&w), n, m).unwrap();
            assert_eq!(direct, via_nf, "word {text}");
        }
    }

    #[test]
    fn graded_monomial_arithmetic() {
        let m = GradedMonomial::one();
        let (s1, m1) = m.mul_b(2, 3).unwrap();
        assert_eq!(s1, 1);
        let (s2, m2) = m1.mul_b(1, 1).unwrap();
        assert_eq!(s2, 1);
        assert_eq!(m2.bset(), &[(1, 1), (2, 3)]);
        let (s3, m3) = m2.mul_b(1, 2).unwrap();
        assert_eq!(s3, -1);
        assert!(m3.mul_b(1, 2).is_none());
        assert_eq!(m3.parity(), 1);
        let m4 = m3.mul_a(1, 2).mul_a(1, 2).mul_a(2, 3);
        assert_eq!(m4.amult(), &[(1, 2), (1, 2), (2, 3)]);
        assert_eq!(m4.degree(), 6);
        assert_eq!(m4.label(), "b(1,1)*b(1,2)*b(2,3)*a(1,2)*a(1,2)*a(2,3)");
    }

    #[test]
    fn graded_monomial_enumeration_counts() {
        let monos = graded_monomials(2, 2);
        let by_degree = |d: usize| monos.iter().filter(|m| m.degree() == d).count();
        assert_eq!(by_degree(0), 1);
        assert_eq!(by_degree(1), 4);
        assert_eq!(by_degree(2), 3 + 3 + 1);
        assert_eq!(monos.len(), 12);
    }

    #[test]
    fn graded_dot_image_on_the_vacuum() {
        let n = 2;
        let dcap = 1;
        let sig = phi_signature(n, 1, dcap);
        let monos = graded_monomials(n, dcap);
        let op = phi_word(&word(1, "y1"), n, dcap).unwrap();
        let one_idx = monos.binary_search(&GradedMonomial::one()).unwrap() as u32;
        let out = op.apply(&SuperVector::basis(sig.clone(), vec![one_idx, 0]));
        let mono_idx = |m: &GradedMonomial| monos.binary_search(m).unwrap() as u32;
        let mut expected = SuperVector::zero(sig);
        expected.add_entry(vec![mono_idx(&GradedMonomial::one().mul_a(1, 2)), 1], rat(1));
        expected.add_entry(
            vec![mono_idx(&GradedMonomial::one().mul_b(1, 1).unwrap().1), n],
            rat(-1),
        );
        expected.add_entry(
            vec![mono_idx(&GradedMonomial::one().mul_b(1, 2).unwrap().1), n + 1],
            rat(-1),
        );
        assert_eq!(out, expected);
    }

    #[test]
    fn graded_functor_extends_the_tensor_functor_on_dot_free_words() {
        let n = 2;
        for (source, text) in [(2, "s1"), (2, "b1"), (1, "b1 s2 b1*"), (0, "b1*")] {
            let w = word(source, text);
            let phi = phi_word(&w, n, 0).unwrap();
            let psi = psi_word(&w, n, 0).unwrap();
            let ambient = phi_signature(n, source as usize, 0);
            let expected = apply_at(&psi, 1, &ambient).unwrap();
            assert_eq!(phi, expected, "word {text}");
        }
    }

    #[test]
    fn dot_summands_move_labels_strictly_forward() {
        for n in 2..=4u32 {
            let order_pos = |l: u32| if l < n { l + 1 } else { 2 * n - (l - n) };
            for (_, xstar, _) in phi_y_summands(n).unwrap() {
                for (&(r, s), _) in xstar.entries() {
                    assert!(
                        order_pos(r) > order_pos(s),
                        "n={n} move {} -> {}",
                        v_label(n, s),
                        v_label(n, r)
                    );
                }
            }
        }
    }

    #[test]
    fn sparse_application_matches_materialized_operators() {
        let n = 2;
        let dcap = 2;
        let mut rng = StdRng::seed_from_u64(0x5eed_0004);
        for _ in 0..25 {
            let source = rng.gen_range(0..=3u32);
            let mut gens = Vec::new();
            let mut st = source;
            for _ in 0..rng.gen_range(0..=5usize) {
                let mut options: Vec<Gen> = Vec::new();
                for i in 1..st {
                    options.push(Gen::S(i));
                    options.push(Gen::B(i));
                }
                for i in 1..=st {
                    options.push(Gen::Y(i));
                }
                if st <= 3 {
                    for i in 1..=st + 1 {
                        options.push(Gen::BStar(i));
                    }
                }
                if options.is_empty() {
                    break;
                }
                let g = options[rng.gen_range(0..options.len())];
                if g.apply_from_below(st).map(|t| t <= 4).unwrap_or(false) {
                    st = g.apply_from_below(st).unwrap();
                    gens.push(g);
                }
            }
            gens.reverse();
            let w = GenWord::new(source, gens).unwrap();
            if w.gens().iter().filter(|g| matches!(g, Gen::Y(_))).count() > dcap as usize {
                continue;
            }
            let op = phi_word(&w, n, dcap).unwrap();
            let monos = graded_monomials(n, dcap);
            for _ in 0..3 {
                let labels: Vec<u32> =
                    (0..source).map(|_| rng.gen_range(0..2 * n)).collect();
                let mono = monos[rng.gen_range(0..monos.len())].clone();
                if mono.degree() + w.gens().iter().filter(|g| matches!(g, Gen::Y(_))).count()
                    > dcap as usize
                {
                    continue;
                }
                let mut start: PhiVector = BTreeMap::new();
                start.insert(
                    PhiState { mono: mono.clone(), labels: labels.clone() },
                    BigRational::one(),
                );
                let sparse = phi_apply_word(&w, n, dcap, start, |_, _| true).unwrap();
                let sparse_super =
                    phi_vector_to_super(&sparse, n, w.target() as usize, dcap);
                let mono_idx = monos.binary_search(&mono).unwrap() as u32;
                let mut tuple = vec![mono_idx];
                tuple.extend_from_slice(&labels);
                let dense_out = op.apply(&SuperVector::basis(
                    phi_signature(n, source as usize, dcap),
                    tuple,
                ));
                assert_eq!(sparse_super, dense_out, "word {w}");
            }
        }
    }

    #[test]
    fn graded_functor_respects_normalization_at_specialized_dots() {
        let n = 2;
        for (source, text) in [(2, "s1 y1"), (1, "y1 s1 y1 b1*"), (2, "b1 y1"), (1, "y2 b1*")] {
            let w = word(source, text);
            let dots = w.gens().iter().filter(|g| matches!(g, Gen::Y(_))).count() as u32;
            let direct = phi_word(&w, n, dots).unwrap();
            let via_nf = phi_morphism(&normal_form(&w), n, dots).unwrap();
            assert_eq!(direct, via_nf, "word {text}");
        }
    }

    #[test]
    fn counting_helper_consistency() {
        assert_eq!(graded_monomials(3, 0).len(), 1);
        let n2d1 = graded_monomials(2, 1);
        assert!(n2d1.iter().all(|m| m.degree() <= 1));
        assert_eq!(n2d1.len(), 5);
    }
}
