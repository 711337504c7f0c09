//! Verification suites: key vectors, pairing certificates, defining relations
//! under the tensor functor, loop values, dot sliding, counting, and flips.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagrams::{
    binomial, canonical_word, canonical_word_tagged, count_basis, enumerate_basis, string_kind,
    DottedDiagram, LetterTag, StringKind, StringOrder,
};
use crate::engine::{compose, flip, normal_form, Morphism};
use crate::hbar::HbarPoly;
use crate::pn_rep::{
    gl_to_v_op, graded_monomials, omega_between, phi_apply_word, phi_signature, pn_basis,
    pn_basis_names, psi_word, psi_word_with_sigma, sigma_op, v_signature, GradedElement,
    GradedMonomial, PhiState, PhiVector, PnError,
};
use crate::superlin::{apply_at, op_add, op_compose, SuperOperator, SuperVector, SuperlinError};
use crate::word::{Gen, GenWord, WordError};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("construction needs {needed} base labels but n = {n}")]
    SmallN { n: u32, needed: u32 },
    #[error("source and target arities differ in parity: a = {0}, b = {1}")]
    Parity(u32, u32),
    #[error("signature mismatch: {0}")]
    Signature(String),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Pn(#[from] PnError),
    #[error(transparent)]
    Lin(#[from] SuperlinError),
}

/// One checked statement of a suite.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationCase {
    pub id: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// A suite of checked statements; ok is the conjunction of the cases.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub cases: Vec<VerificationCase>,
    pub ok: bool,
}

impl VerificationReport {
    pub fn new(suite: &str, cases: Vec<VerificationCase>) -> VerificationReport {
        let ok = cases.iter().all(|c| c.pass);
        VerificationReport { suite: suite.to_string(), cases, ok }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub(crate) fn case(id: String, pass: bool, witness: impl FnOnce() -> String) -> VerificationCase {
    VerificationCase { id, pass, witness: if pass { None } else { Some(witness()) } }
}

fn rat(i: i64) -> BigRational {
    BigRational::from_integer(i.into())
}

/// A basis diagram with a base label at every boundary point: near and far
/// labels per string from the fresh-counter walk in string order, with the
/// right ends of caps and cups primed. Boundary labels are stored as indices
/// into the ordered basis of V, so base t is t-1 and primed t is n+t-1.
#[derive(Debug, Clone)]
pub struct LabelledDiagram {
    diagram: DottedDiagram,
    n: u32,
    near: Vec<u32>,
    far: Vec<u32>,
    bottom: Vec<u32>,
    top: Vec<u32>,
}

impl LabelledDiagram {
    pub fn diagram(&self) -> &DottedDiagram {
        &self.diagram
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Base label of the near end of each string, indexed like the pair list.
    pub fn near(&self) -> &[u32] {
        &self.near
    }

    pub fn far(&self) -> &[u32] {
        &self.far
    }

    /// Label indices at bottom points 1..a.
    pub fn bottom(&self) -> &[u32] {
        &self.bottom
    }

    /// Label indices at top points 1..b.
    pub fn top(&self) -> &[u32] {
        &self.top
    }

    pub fn max_base_label(&self) -> u32 {
        self.far.iter().copied().max().unwrap_or(0)
    }
}

/// Labels a diagram by walking its strings in string order with a fresh
/// counter: a string with l dots takes l+1 consecutive base labels, its near
/// end the first and its far end the last. Caps carry the near label at the
/// left end and the primed far label at the right end; through strings run
/// near to far bottom to top; cups carry the far label at the left end and
/// the primed near label at the right end.
pub fn key_labelling(d: &DottedDiagram, n: u32) -> Result<LabelledDiagram, VerifyError> {
    let needed = (d.a() + d.b()) / 2 + d.total_dots();
    if n < needed {
        return Err(VerifyError::SmallN { n, needed });
    }
    let conn = d.connector();
    let order = StringOrder::of(conn);
    let mut near = vec![0u32; conn.num_strings()];
    let mut far = vec![0u32; conn.num_strings()];
    let mut fresh = 1u32;
    for &idx in order.indices() {
        let dots = d.dots()[idx];
        near[idx] = fresh;
        far[idx] = fresh + dots;
        fresh += dots + 1;
    }
    let mut bottom = vec![0u32; d.a() as usize];
    let mut top = vec![0u32; d.b() as usize];
    for (idx, &(p, q)) in conn.pairs().iter().enumerate() {
        match string_kind((p, q)) {
            StringKind::Cap => {
                bottom[p.index() as usize - 1] = near[idx] - 1;
                bottom[q.index() as usize - 1] = n + far[idx] - 1;
            }
            StringKind::Through => {
                bottom[p.index() as usize - 1] = near[idx] - 1;
                top[q.index() as usize - 1] = far[idx] - 1;
            }
            StringKind::Cup => {
                top[p.index() as usize - 1] = far[idx] - 1;
                top[q.index() as usize - 1] = n + near[idx] - 1;
            }
        }
    }
    Ok(LabelledDiagram { diagram: d.clone(), n, near, far, bottom, top })
}

/// The pure tensors read off the labelled diagram: label indices of v_d at
/// the bottom and of w_d at the top.
pub fn key_vectors(d: &DottedDiagram, n: u32) -> Result<(Vec<u32>, Vec<u32>), VerifyError> {
    let lab = key_labelling(d, n)?;
    Ok((lab.bottom, lab.top))
}

/// The G-coefficient of the standard basis tensor w in a vector of
/// G_{<= dcap} (x) V^{(x) w.len()}, monomial factor first.
pub fn pairing(
    w: &[u32],
    z: &SuperVector,
    n: u32,
    dcap: u32,
) -> Result<GradedElement, VerifyError> {
    let expect = phi_signature(n, w.len(), dcap);
    if *z.sig() != expect {
        return Err(VerifyError::Signature(format!(
            "vector does not live on the graded space over {} tensor factors",
            w.len()
        )));
    }
    let monos = graded_monomials(n, dcap);
    let mut out = GradedElement::zero(n);
    for (tuple, c) in z.entries() {
        if tuple[1..] == *w {
            out.add_term(monos[tuple[0] as usize].clone(), c.clone());
        }
    }
    Ok(out)
}

fn pairing_states(w: &[u32], z: &PhiVector, n: u32) -> GradedElement {
    let mut out = GradedElement::zero(n);
    for (state, c) in z {
        if state.labels == w {
            out.add_term(state.mono.clone(), c.clone());
        }
    }
    out
}

/// Evaluates the pairing of w_d against the graded functor image of d applied
/// to 1 (x) v_d, pruning states that cannot reach the read-off: along each
/// dotted string the label must climb exactly one base step per dot, and each
/// cup must be created on its near label with the primed copy on the right
/// end. Dot images move labels strictly forward and boundary labels are never
/// rewritten afterwards, so every pruned state contributes nothing.
pub fn diagonal_pairing(d: &DottedDiagram, n: u32) -> Result<GradedElement, VerifyError> {
    let lab = key_labelling(d, n)?;
    let (word, tags) = canonical_word_tagged(d);
    let gens: Vec<Gen> = word.gens().to_vec();
    let mut run_hi: BTreeMap<usize, usize> = BTreeMap::new();
    for (widx, tag) in tags.iter().enumerate() {
        if let LetterTag::Dot(sidx) = tag {
            let hi = run_hi.entry(*sidx).or_insert(widx);
            *hi = (*hi).max(widx);
        }
    }
    let start: PhiVector = BTreeMap::from([(
        PhiState { mono: GradedMonomial::one(), labels: lab.bottom.clone() },
        BigRational::one(),
    )]);
    let keep = |widx: usize, state: &PhiState| -> bool {
        match tags[widx] {
            LetterTag::Dot(sidx) => {
                let Gen::Y(k) = gens[widx] else { unreachable!("dot tags mark dot letters") };
                let applied = (run_hi[&sidx] - widx + 1) as u32;
                state.labels[k as usize - 1] == lab.near[sidx] - 1 + applied
            }
            LetterTag::Cup(sidx) => {
                let Gen::BStar(x) = gens[widx] else { unreachable!("cup tags mark cup letters") };
                state.labels[x as usize - 1] == lab.near[sidx] - 1
                    && state.labels[x as usize] == n + lab.near[sidx] - 1
            }
            _ => true,
        }
    };
    let out = phi_apply_word(&word, n, d.total_dots(), start, keep)?;
    Ok(pairing_states(&lab.top, &out, n))
}

/// The matrix of pairings over the dotted-diagram basis at (a, b, k), with
/// n = (a+b)/2 + k: entry (d, d') pairs w_d against the image of 1 (x) v_d
/// under the graded functor applied to d'. Strict diagonality with non-zero
/// diagonal certifies linear independence of the basis images.
pub fn independence_matrix(
    a: u32,
    b: u32,
    k: u32,
) -> Result<Vec<Vec<GradedElement>>, VerifyError> {
    if a % 2 != b % 2 {
        return Err(VerifyError::Parity(a, b));
    }
    let n = (a + b) / 2 + k;
    let basis = enumerate_basis(a, b, k);
    let labs: Vec<LabelledDiagram> =
        basis.iter().map(|d| key_labelling(d, n)).collect::<Result<_, _>>()?;
    let words: Vec<GenWord> = basis.iter().map(canonical_word).collect();
    let mut matrix = Vec::with_capacity(basis.len());
    for lab in &labs {
        let mut row = Vec::with_capacity(basis.len());
        for word in &words {
            let start: PhiVector = BTreeMap::from([(
                PhiState { mono: GradedMonomial::one(), labels: lab.bottom.clone() },
                BigRational::one(),
            )]);
            let out = phi_apply_word(word, n, k, start, |_, _| true)?;
            row.push(pairing_states(&lab.top, &out, n));
        }
        matrix.push(row);
    }
    Ok(matrix)
}

/// The parameter sets whose independence certificates the suite checks.
pub fn default_independence_sets() -> Vec<(u32, u32, u32)> {
    vec![(1, 1, 1), (2, 2, 1), (2, 2, 2), (1, 3, 1), (3, 3, 1)]
}

pub fn check_independence(sets: &[(u32, u32, u32)]) -> Result<VerificationReport, VerifyError> {
    let mut cases = Vec::new();
    for &(a, b, k) in sets {
        let basis = enumerate_basis(a, b, k);
        let matrix = independence_matrix(a, b, k)?;
        let mut pass = true;
        let mut witness = String::new();
        for (i, row) in matrix.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                let good = if i == j { !entry.is_zero() } else { entry.is_zero() };
                if !good && pass {
                    pass = false;
                    witness = format!(
                        "entry for row {} and column {} is {}",
                        basis[i], basis[j], entry
                    );
                }
            }
        }
        cases.push(case(format!("indep.a{a}.b{b}.k{k}"), pass, || witness));
    }
    Ok(VerificationReport::new("independence", cases))
}

struct RelCase {
    id: String,
    display: String,
    lhs: Vec<(HbarPoly, GenWord)>,
    rhs: Vec<(HbarPoly, GenWord)>,
}

fn rel_side(a: u32, terms: &[(HbarPoly, String)]) -> Vec<(HbarPoly, GenWord)> {
    terms
        .iter()
        .map(|(c, t)| (c.clone(), GenWord::parse(t, a).expect("catalogue word is arity-correct")))
        .collect()
}

fn rel_display(terms: &[(HbarPoly, String)]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    terms
        .iter()
        .map(|(c, t)| {
            let w = if t.is_empty() { "1" } else { t.as_str() };
            format!("({c})*[{w}]")
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

fn push_rel(
    out: &mut Vec<RelCase>,
    id: String,
    a: u32,
    lhs: Vec<(HbarPoly, String)>,
    rhs: Vec<(HbarPoly, String)>,
) {
    let display = format!("{} == {}", rel_display(&lhs), rel_display(&rhs));
    out.push(RelCase { id, display, lhs: rel_side(a, &lhs), rhs: rel_side(a, &rhs) });
}

/// The defining relation instances with ambient arity up to a_max, as formal
/// sums of generator words with coefficients in the deformation parameter.
fn relation_cases(a_max: u32) -> Vec<RelCase> {
    let one = HbarPoly::one;
    let h = || HbarPoly::hbar_pow(1);
    let mut out = Vec::new();
    for a in 2..=a_max {
        for i in 1..a {
            push_rel(
                &mut out,
                format!("R1.a[a={a},i={i}]"),
                a,
                vec![(one(), format!("s{i} s{i}"))],
                vec![(one(), String::new())],
            );
        }
    }
    for a in 3..=a_max {
        for i in 1..a - 1 {
            push_rel(
                &mut out,
                format!("R1.b[a={a},i={i}]"),
                a,
                vec![(one(), format!("s{i} s{} s{i}", i + 1))],
                vec![(one(), format!("s{} s{i} s{}", i + 1, i + 1))],
            );
        }
    }
    for a in 4..=a_max {
        for i in 1..a {
            for j in i + 2..a {
                push_rel(
                    &mut out,
                    format!("R1.c[a={a},i={i},j={j}]"),
                    a,
                    vec![(one(), format!("s{i} s{j}"))],
                    vec![(one(), format!("s{j} s{i}"))],
                );
            }
        }
    }
    for a in 1..=a_max {
        for i in 1..=a {
            push_rel(
                &mut out,
                format!("R2.a[a={a},i={i}]"),
                a,
                vec![(one(), format!("b{i} b{}*", i + 1))],
                vec![(-one(), String::new())],
            );
            push_rel(
                &mut out,
                format!("R2.b[a={a},i={i}]"),
                a,
                vec![(one(), format!("b{} b{i}*", i + 1))],
                vec![(one(), String::new())],
            );
            push_rel(
                &mut out,
                format!("R3.a[a={a},i={i}]"),
                a,
                vec![(one(), format!("s{} b{i}*", i + 1))],
                vec![(one(), format!("s{i} b{}*", i + 1))],
            );
        }
    }
    for a in 0..=a_max {
        for i in 1..=a + 1 {
            push_rel(
                &mut out,
                format!("R3.b[a={a},i={i}]"),
                a,
                vec![(one(), format!("s{i} b{i}*"))],
                vec![(-one(), format!("b{i}*"))],
            );
        }
    }
    for a in 2..=a_max {
        for i in 1..a {
            push_rel(
                &mut out,
                format!("R3.c[a={a},i={i}]"),
                a,
                vec![(one(), format!("b{i} s{i}"))],
                vec![(one(), format!("b{i}"))],
            );
        }
    }
    for a in 3..=a_max {
        for i in 1..a - 1 {
            push_rel(
                &mut out,
                format!("R3.d[a={a},i={i}]"),
                a,
                vec![(one(), format!("b{i} s{}", i + 1))],
                vec![(one(), format!("b{} s{i}", i + 1))],
            );
        }
    }
    // Height moves: disjoint odd generators anticommute, with the later cup
    // index shifted by the earlier insertion.
    for a in 0..=a_max {
        for i in 1..=a + 1 {
            for j in i..=a + 1 {
                push_rel(
                    &mut out,
                    format!("height.cupcup[a={a},i={i},j={j}]"),
                    a,
                    vec![(one(), format!("b{i}* b{j}*"))],
                    vec![(-one(), format!("b{}* b{i}*", j + 2))],
                );
            }
        }
    }
    for a in 2..=a_max {
        for i in 1..a {
            for j in i + 2..=a + 1 {
                push_rel(
                    &mut out,
                    format!("height.capcup[a={a},i={i},j={j}]"),
                    a,
                    vec![(one(), format!("b{i} b{j}*"))],
                    vec![(-one(), format!("b{}* b{i}", j - 2))],
                );
            }
        }
    }
    for a in 4..=a_max {
        for i in 1..a {
            for j in i + 2..a {
                push_rel(
                    &mut out,
                    format!("height.capcap[a={a},i={i},j={j}]"),
                    a,
                    vec![(one(), format!("b{i} b{j}"))],
                    vec![(-one(), format!("b{} b{i}", j - 2))],
                );
            }
        }
    }
    for a in 2..=a_max {
        for i in 1..a {
            push_rel(
                &mut out,
                format!("R4.a[a={a},i={i}]"),
                a,
                vec![(one(), format!("s{i} y{i}"))],
                vec![
                    (one(), format!("y{} s{i}", i + 1)),
                    (-h(), String::new()),
                    (-h(), format!("e{i}")),
                ],
            );
            push_rel(
                &mut out,
                format!("R4.b[a={a},i={i}]"),
                a,
                vec![(one(), format!("s{i} y{}", i + 1))],
                vec![
                    (one(), format!("y{i} s{i}")),
                    (h(), String::new()),
                    (-h(), format!("e{i}")),
                ],
            );
            push_rel(
                &mut out,
                format!("R4.c[a={a},i={i}]"),
                a,
                vec![(one(), format!("b{i} y{}", i + 1))],
                vec![(one(), format!("b{i} y{i}")), (h(), format!("b{i}"))],
            );
            push_rel(
                &mut out,
                format!("R4.h[a={a},i={i}]"),
                a,
                vec![(one(), format!("y{}", i + 1))],
                vec![
                    (one(), format!("s{i} y{i} s{i}")),
                    (h(), format!("s{i}")),
                    (h(), format!("e{i}")),
                ],
            );
            push_rel(
                &mut out,
                format!("R4.i.left[a={a},i={i}]"),
                a,
                vec![(one(), format!("e{i} y{}", i + 1))],
                vec![(one(), format!("e{i} y{i}")), (h(), format!("e{i}"))],
            );
            push_rel(
                &mut out,
                format!("R4.i.right[a={a},i={i}]"),
                a,
                vec![(one(), format!("y{} e{i}", i + 1))],
                vec![(one(), format!("y{i} e{i}")), (-h(), format!("e{i}"))],
            );
            push_rel(
                &mut out,
                format!("R4.j.left[a={a},i={i}]"),
                a,
                vec![(one(), format!("e{i} s{i}"))],
                vec![(one(), format!("e{i}"))],
            );
            push_rel(
                &mut out,
                format!("R4.j.right[a={a},i={i}]"),
                a,
                vec![(one(), format!("s{i} e{i}"))],
                vec![(-one(), format!("e{i}"))],
            );
            push_rel(
                &mut out,
                format!("R4.k[a={a},i={i}]"),
                a,
                vec![(one(), format!("e{i} e{i}"))],
                vec![],
            );
        }
    }
    for a in 3..=a_max {
        for i in 1..a - 1 {
            push_rel(
                &mut out,
                format!("R4.l.left[a={a},i={i}]"),
                a,
                vec![(one(), format!("e{i} e{} e{i}", i + 1))],
                vec![(-one(), format!("e{i}"))],
            );
            push_rel(
                &mut out,
                format!("R4.l.right[a={a},i={i}]"),
                a,
                vec![(one(), format!("e{} e{i} e{}", i + 1, i + 1))],
                vec![(-one(), format!("e{}", i + 1))],
            );
        }
    }
    for a in 0..=a_max {
        for i in 1..=a + 1 {
            push_rel(
                &mut out,
                format!("R4.d[a={a},i={i}]"),
                a,
                vec![(one(), format!("y{} b{i}*", i + 1))],
                vec![(one(), format!("y{i} b{i}*")), (-h(), format!("b{i}*"))],
            );
        }
    }
    for a in 2..=a_max {
        for i in 1..a {
            for j in 1..=a {
                if j == i || j == i + 1 {
                    continue;
                }
                push_rel(
                    &mut out,
                    format!("R4.e[a={a},i={i},j={j}]"),
                    a,
                    vec![(one(), format!("s{i} y{j}"))],
                    vec![(one(), format!("y{j} s{i}"))],
                );
            }
        }
    }
    for a in 2..=a_max {
        for i in 1..a {
            for j in i + 1..=a {
                push_rel(
                    &mut out,
                    format!("R4.f[a={a},i={i},j={j}]"),
                    a,
                    vec![(one(), format!("y{i} y{j}"))],
                    vec![(one(), format!("y{j} y{i}"))],
                );
            }
        }
    }
    for a in 2..=a_max {
        for i in 1..a {
            for j in 1..i {
                push_rel(
                    &mut out,
                    format!("R4.g.cap.low[a={a},i={i},j={j}]"),
                    a,
                    vec![(one(), format!("b{i} y{j}"))],
                    vec![(one(), format!("y{j} b{i}"))],
                );
            }
            for j in i + 2..=a {
                push_rel(
                    &mut out,
                    format!("R4.g.cap.high[a={a},i={i},j={j}]"),
                    a,
                    vec![(one(), format!("b{i} y{j}"))],
                    vec![(one(), format!("y{} b{i}", j - 2))],
                );
            }
        }
    }
    for a in 1..=a_max {
        for i in 1..=a + 1 {
            for j in 1..i.min(a + 1) {
                push_rel(
                    &mut out,
                    format!("R4.g.cup.low[a={a},i={i},j={j}]"),
                    a,
                    vec![(one(), format!("b{i}* y{j}"))],
                    vec![(one(), format!("y{j} b{i}*"))],
                );
            }
            for j in i..=a {
                push_rel(
                    &mut out,
                    format!("R4.g.cup.high[a={a},i={i},j={j}]"),
                    a,
                    vec![(one(), format!("b{i}* y{j}"))],
                    vec![(one(), format!("y{} b{i}*", j + 2))],
                );
            }
        }
    }
    out
}

fn rel_case_holds(
    c: &RelCase,
    n: u32,
    m: usize,
    sigma: &SuperOperator,
) -> Result<bool, VerifyError> {
    let one = BigRational::one();
    let mut acc: Option<SuperOperator> = None;
    for (sign, side) in [(1i64, &c.lhs), (-1i64, &c.rhs)] {
        for (coeff, w) in side {
            let value = coeff.eval(&one) * rat(sign);
            if value.is_zero() {
                continue;
            }
            let op = psi_word_with_sigma(w, n, m, sigma)?.scale(&value);
            acc = Some(match acc {
                None => op,
                Some(prev) => op_add(&prev, &op)?,
            });
        }
    }
    Ok(acc.map_or(true, |op| op.is_zero()))
}

/// The superswap with the sign of a single matrix entry flipped, for
/// negative-control runs of the relation suite.
pub fn corrupted_sigma(n: u32) -> SuperOperator {
    let base = sigma_op(n);
    let mut out = SuperOperator::new(base.source().clone(), base.target().clone(), 0);
    for (t, row) in base.entries() {
        for (u, c) in row {
            let c = if t[..] == [0, 1] { -c.clone() } else { c.clone() };
            out.add_entry(t.clone(), u.clone(), c);
        }
    }
    out
}

/// Checks every defining relation instance with ambient arity up to a_max as
/// an exact operator identity under the tensor functor with m module factors,
/// plus commutation of the fake Casimir with the diagonal action and pairwise
/// commutation of the dot images.
pub fn check_relations(n: u32, m: usize, a_max: u32) -> Result<VerificationReport, VerifyError> {
    check_relations_with_sigma(n, m, a_max, &sigma_op(n))
}

/// As check_relations, with the crossing image supplied by the caller.
pub fn check_relations_with_sigma(
    n: u32,
    m: usize,
    a_max: u32,
    sigma: &SuperOperator,
) -> Result<VerificationReport, VerifyError> {
    let mut cases = Vec::new();
    for rc in relation_cases(a_max) {
        let pass = rel_case_holds(&rc, n, m, sigma)?;
        cases.push(case(rc.id.clone(), pass, || {
            format!("operator images differ for {}", rc.display)
        }));
    }
    let sig2 = v_signature(n, 2);
    let omega = omega_between(n, 0, 1, &sig2)?;
    let minus = -BigRational::one();
    for (x, name) in pn_basis(n)?.iter().zip(pn_basis_names(n)) {
        let local = gl_to_v_op(x);
        let diag = op_add(&apply_at(&local, 0, &sig2)?, &apply_at(&local, 1, &sig2)?)?;
        let comm = op_add(
            &op_compose(&diag, &omega)?,
            &op_compose(&omega, &diag)?.scale(&minus),
        )?;
        cases.push(case(format!("delta.{name}"), comm.is_zero(), || {
            format!("the fake Casimir does not commute with the diagonal action of {name}")
        }));
    }
    for i in 1..=a_max {
        for j in i + 1..=a_max {
            let yi = psi_word_with_sigma(&GenWord::parse(&format!("y{i}"), a_max)?, n, m, sigma)?;
            let yj = psi_word_with_sigma(&GenWord::parse(&format!("y{j}"), a_max)?, n, m, sigma)?;
            let comm = op_add(&op_compose(&yi, &yj)?, &op_compose(&yj, &yi)?.scale(&minus))?;
            cases.push(case(format!("ycomm.y{i}.y{j}"), comm.is_zero(), || {
                format!("dot images y{i} and y{j} do not commute")
            }));
        }
    }
    Ok(VerificationReport::new("relations", cases))
}

/// Normal forms of the loop words with k and l dots on the two loop strands
/// are zero, cross-checked as operators under the tensor functor.
pub fn check_loops(k_max: u32, l_max: u32) -> Result<VerificationReport, VerifyError> {
    let mut cases = Vec::new();
    for k in 0..=k_max {
        for l in 0..=l_max {
            let mut gens = vec![Gen::B(1)];
            gens.extend(std::iter::repeat(Gen::Y(1)).take(k as usize));
            gens.extend(std::iter::repeat(Gen::Y(2)).take(l as usize));
            gens.push(Gen::BStar(1));
            let w = GenWord::new(0, gens)?;
            let nf = normal_form(&w);
            let op0 = psi_word(&w, 2, 0)?;
            let op1 = psi_word(&w, 2, 1)?;
            let pass = nf.is_zero() && op0.is_zero() && op1.is_zero();
            cases.push(case(format!("loop.k{k}.l{l}"), pass, || {
                format!("loop with {k} and {l} dots does not vanish: normal form {nf}")
            }));
        }
    }
    Ok(VerificationReport::new("loops", cases))
}

/// Enumerated basis sizes match the closed-form count for all parameters in
/// range, including the zero count at odd parity.
pub fn check_counting(a_max: u32, b_max: u32, k_max: u32) -> VerificationReport {
    let mut cases = Vec::new();
    for a in 0..=a_max {
        for b in 0..=b_max {
            for k in 0..=k_max {
                let enumerated = enumerate_basis(a, b, k).len() as u64;
                let counted = count_basis(a, b, k);
                let pass = num_bigint::BigUint::from(enumerated) == counted;
                cases.push(case(format!("count.a{a}.b{b}.k{k}"), pass, || {
                    format!("enumerated {enumerated} diagrams but the formula gives {counted}")
                }));
            }
        }
    }
    VerificationReport::new("counting", cases)
}

fn repeated(letter: &str, times: u32) -> String {
    std::iter::repeat(letter).take(times as usize).collect::<Vec<_>>().join(" ")
}

fn joined(parts: &[String]) -> String {
    parts.iter().filter(|p| !p.is_empty()).cloned().collect::<Vec<_>>().join(" ")
}

fn nf_text(text: &str, source: u32) -> Morphism {
    normal_form(&GenWord::parse(text, source).expect("sliding word is arity-correct"))
}

fn binom_poly(k: u32, j: u32, hbar_power: u32, negate_odd: bool) -> HbarPoly {
    let mut c = BigRational::from_integer(BigInt::from(binomial(k as u64, j as u64)));
    if negate_odd && (k + j) % 2 == 1 {
        c = -c;
    }
    HbarPoly::monomial(c, hbar_power as usize)
}

/// Dot-sliding identities as exact equalities of normal forms with symbolic
/// deformation parameter: the one-dot crossing and cup rules, the binomial
/// rules for sliding a dot power across a cap or cup, and the closed form for
/// sliding a dot power across a crossing.
pub fn check_dotslide(k_max: u32) -> VerificationReport {
    let mut cases = Vec::new();
    let h = HbarPoly::hbar_pow(1);
    for (a, i) in [(2u32, 1u32), (3, 2)] {
        let si = format!("s{i}");
        let yi = format!("y{i}");
        let yi1 = format!("y{}", i + 1);
        let bi = format!("b{i}");
        let cupi = format!("b{i}*");
        let ei = format!("e{i}");

        let mut lhs = nf_text(&format!("{si} {yi1}"), a);
        let mut rhs = nf_text(&format!("{yi} {si}"), a);
        rhs.add_scaled(&Morphism::identity(a), &h);
        rhs.add_scaled(&nf_text(&ei, a), &-h.clone());
        cases.push(case(format!("slide.one.a[a={a},i={i}]"), lhs == rhs, || {
            format!("crossing rule for one dot at strand {} fails at arity {a}", i + 1)
        }));

        lhs = nf_text(&format!("{si} {yi}"), a);
        rhs = nf_text(&format!("{yi1} {si}"), a);
        rhs.add_scaled(&Morphism::identity(a), &-h.clone());
        rhs.add_scaled(&nf_text(&ei, a), &-h.clone());
        cases.push(case(format!("slide.one.b[a={a},i={i}]"), lhs == rhs, || {
            format!("crossing rule for one dot at strand {i} fails at arity {a}")
        }));

        lhs = nf_text(&format!("{yi1} {cupi}"), a);
        rhs = nf_text(&format!("{yi} {cupi}"), a);
        rhs.add_scaled(&nf_text(&cupi, a), &-h.clone());
        cases.push(case(format!("slide.one.c[a={a},i={i}]"), lhs == rhs, || {
            format!("cup rule for one dot fails at arity {a}, index {i}")
        }));

        for k in 1..=k_max {
            let lhs = nf_text(&joined(&[bi.clone(), repeated(&yi1, k)]), a);
            let mut rhs = Morphism::zero(a, a - 2);
            for j in 0..=k {
                let term = nf_text(&joined(&[bi.clone(), repeated(&yi, j)]), a);
                rhs.add_scaled(&term, &binom_poly(k, j, k - j, false));
            }
            cases.push(case(format!("slide.cap.right.k{k}[a={a},i={i}]"), lhs == rhs, || {
                format!("binomial rule for {k} dots at the right of a cap fails at arity {a}")
            }));

            let lhs = nf_text(&joined(&[bi.clone(), repeated(&yi, k)]), a);
            let mut rhs = Morphism::zero(a, a - 2);
            for j in 0..=k {
                let term = nf_text(&joined(&[bi.clone(), repeated(&yi1, j)]), a);
                rhs.add_scaled(&term, &binom_poly(k, j, k - j, true));
            }
            cases.push(case(format!("slide.cap.left.k{k}[a={a},i={i}]"), lhs == rhs, || {
                format!("binomial rule for {k} dots at the left of a cap fails at arity {a}")
            }));

            let lhs = nf_text(&joined(&[repeated(&yi, k), cupi.clone()]), a);
            let mut rhs = Morphism::zero(a, a + 2);
            for j in 0..=k {
                let term = nf_text(&joined(&[repeated(&yi1, j), cupi.clone()]), a);
                rhs.add_scaled(&term, &binom_poly(k, j, k - j, false));
            }
            cases.push(case(format!("slide.cup.left.k{k}[a={a},i={i}]"), lhs == rhs, || {
                format!("binomial rule for {k} dots at the left of a cup fails at arity {a}")
            }));

            let lhs = nf_text(&joined(&[repeated(&yi1, k), cupi.clone()]), a);
            let mut rhs = Morphism::zero(a, a + 2);
            for j in 0..=k {
                let term = nf_text(&joined(&[repeated(&yi, j), cupi.clone()]), a);
                rhs.add_scaled(&term, &binom_poly(k, j, k - j, true));
            }
            cases.push(case(format!("slide.cup.right.k{k}[a={a},i={i}]"), lhs == rhs, || {
                format!("binomial rule for {k} dots at the right of a cup fails at arity {a}")
            }));

            let lhs = nf_text(&joined(&[si.clone(), repeated(&yi1, k)]), a);
            let mut rhs = nf_text(&joined(&[repeated(&yi, k), si.clone()]), a);
            for j in 0..k {
                let plain = nf_text(&joined(&[repeated(&yi, k - 1 - j), repeated(&yi1, j)]), a);
                let tube = nf_text(
                    &joined(&[repeated(&yi, k - 1 - j), ei.clone(), repeated(&yi1, j)]),
                    a,
                );
                rhs.add_scaled(&plain, &h);
                rhs.add_scaled(&tube, &-h.clone());
            }
            cases.push(case(format!("slide.gen.right.k{k}[a={a},i={i}]"), lhs == rhs, || {
                format!("closed form for {k} dots crossing from strand {} fails at arity {a}", i + 1)
            }));

            let lhs = nf_text(&joined(&[si.clone(), repeated(&yi, k)]), a);
            let mut rhs = nf_text(&joined(&[repeated(&yi1, k), si.clone()]), a);
            for j in 0..k {
                let plain = nf_text(&joined(&[repeated(&yi, k - 1 - j), repeated(&yi1, j)]), a);
                let tube = nf_text(
                    &joined(&[
                        repeated(&yi1, j),
                        cupi.clone(),
                        bi.clone(),
                        repeated(&yi, k - 1 - j),
                    ]),
                    a,
                );
                rhs.add_scaled(&plain, &-h.clone());
                rhs.add_scaled(&tube, &-h.clone());
            }
            cases.push(case(format!("slide.gen.left.k{k}[a={a},i={i}]"), lhs == rhs, || {
                format!("closed form for {k} dots crossing from strand {i} fails at arity {a}")
            }));
        }
    }
    VerificationReport::new("dotslide", cases)
}

/// A uniformly random stage-valid word with the given source arity, letter
/// budget, and dot budget, keeping intermediate arities small.
pub fn random_word(rng: &mut impl Rng, source: u32, len: usize, max_dots: u32) -> GenWord {
    loop {
        let mut gens: Vec<Gen> = Vec::new();
        let mut m = source;
        let mut dots = 0;
        for _ in 0..len {
            let mut options: Vec<Gen> = Vec::new();
            for i in 1..m {
                options.push(Gen::S(i));
            }
            if dots < max_dots {
                for i in 1..=m {
                    options.push(Gen::Y(i));
                }
            }
            for i in 1..m {
                options.push(Gen::B(i));
            }
            if m <= 3 {
                for i in 1..=m + 1 {
                    options.push(Gen::BStar(i));
                }
            }
            if options.is_empty() {
                break;
            }
            let g = options[rng.gen_range(0..options.len())];
            if matches!(g, Gen::Y(_)) {
                dots += 1;
            }
            m = g.apply_from_below(m).unwrap();
            gens.insert(0, g);
        }
        if let Ok(w) = GenWord::new(source, gens) {
            if w.target() <= 5 {
                return w;
            }
        }
    }
}

/// Flip properties on a random word corpus: four flips are the identity and
/// the flip of a composition is the composition of the flips in reverse
/// order.
pub fn check_flip(trials: usize, seed: u64) -> VerificationReport {
    use rand::SeedableRng;
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let mut cases = Vec::new();
    for t in 0..trials {
        let source = rng.gen_range(0..=3u32);
        let len = rng.gen_range(0..=8usize);
        let w = random_word(&mut rng, source, len, 3);
        let f = normal_form(&w);
        let four = flip(&flip(&flip(&flip(&f))));
        cases.push(case(format!("flip.quadruple.t{t}"), four == f, || {
            format!("four flips do not fix the normal form of {w}")
        }));
        let cut = rng.gen_range(0..=w.len());
        let lower = GenWord::new(w.source(), w.gens()[cut..].to_vec()).expect("valid suffix");
        let upper = GenWord::new(lower.target(), w.gens()[..cut].to_vec()).expect("valid prefix");
        let fu = normal_form(&upper);
        let fl = normal_form(&lower);
        let lhs = flip(&compose(&fu, &fl).expect("arities match"));
        let rhs = compose(&flip(&fl), &flip(&fu)).expect("arities match");
        cases.push(case(format!("flip.antimult.t{t}"), lhs == rhs, || {
            format!("flip fails to reverse the composition split of {w} at {cut}")
        }));
    }
    VerificationReport::new("flip", cases)
}
