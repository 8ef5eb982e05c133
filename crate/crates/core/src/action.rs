//! Finite-dimensional algebras given by structure constants, actions of one
//! algebra on another, semidirect products, and identity checks on bases.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::exactnum::{Field, FieldKind};
use crate::freealg::{FreeAlgError, Identity, NonAssocPoly};
use crate::magma::MagmaWord;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ActionError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("identity is not multilinear")]
    NotMultilinear,
    #[error("identity is not homogeneous")]
    NotHomogeneous,
    #[error("characteristic {characteristic} does not exceed the identity degree {degree}")]
    CharacteristicTooSmall { characteristic: u64, degree: usize },
    #[error("algebra {0} is not abelian and one-dimensional")]
    NotAbelianOneGenerated(usize),
    #[error("action table {0} must have exactly one actor")]
    NotSingleActor(usize),
    #[error("degree cap must be at least 1")]
    ZeroCap,
    #[error("algebra is over {found}, expected {expected}")]
    FieldMismatch { expected: FieldKind, found: FieldKind },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    FreeAlg(#[from] FreeAlgError),
}

fn parse_err(line: usize, message: impl Into<String>) -> ActionError {
    ActionError::Parse {
        line,
        message: message.into(),
    }
}

/// An algebra on the basis e₁..eₙ; `table[i][j]` is eᵢ·eⱼ as a sparse vector.
#[derive(Clone)]
pub struct FinAlgebra<F: Field> {
    field: F,
    labels: Vec<String>,
    table: Vec<Vec<Vec<(usize, F::Elem)>>>,
}

impl<F: Field> fmt::Debug for FinAlgebra<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl<F: Field> FinAlgebra<F> {
    /// The abelian algebra (all products zero) on `labels`.
    pub fn abelian(field: F, labels: Vec<String>) -> Self {
        let n = labels.len();
        FinAlgebra {
            field,
            labels,
            table: vec![vec![Vec::new(); n]; n],
        }
    }

    pub fn with_dim(field: F, n: usize) -> Self {
        Self::abelian(field, (1..=n).map(|i| format!("e{i}")).collect())
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn zero_vec(&self) -> Vec<F::Elem> {
        vec![self.field.zero(); self.dim()]
    }

    pub fn basis_vec(&self, i: usize) -> Vec<F::Elem> {
        let mut v = self.zero_vec();
        v[i] = self.field.one();
        v
    }

    /// Sets eᵢ·eⱼ from a dense vector.
    pub fn set_product(&mut self, i: usize, j: usize, v: &[F::Elem]) -> Result<(), ActionError> {
        if v.len() != self.dim() {
            return Err(ActionError::DimensionMismatch {
                expected: self.dim(),
                got: v.len(),
            });
        }
        self.table[i][j] = sparse(&self.field, v);
        Ok(())
    }

    pub fn product(&self, i: usize, j: usize) -> Vec<F::Elem> {
        let mut v = self.zero_vec();
        for (k, c) in &self.table[i][j] {
            v[*k] = c.clone();
        }
        v
    }

    pub fn is_abelian(&self) -> bool {
        self.table.iter().all(|row| row.iter().all(Vec::is_empty))
    }

    /// Bilinear product of two coordinate vectors.
    pub fn mul(&self, u: &[F::Elem], v: &[F::Elem]) -> Vec<F::Elem> {
        let k = &self.field;
        let mut out = self.zero_vec();
        for (i, a) in u.iter().enumerate().filter(|(_, a)| !k.is_zero(a)) {
            for (j, b) in v.iter().enumerate().filter(|(_, b)| !k.is_zero(b)) {
                let ab = k.mul(a, b);
                for (t, c) in &self.table[i][j] {
                    out[*t] = k.add(&out[*t], &k.mul(&ab, c));
                }
            }
        }
        out
    }

    /// `2*e1 - e3`, or `0`.
    pub fn format_vec(&self, v: &[F::Elem]) -> String {
        let k = &self.field;
        let mut s = String::new();
        for (i, c) in v.iter().enumerate().filter(|(_, c)| !k.is_zero(c)) {
            let neg = k.is_negative(c);
            let abs = if neg { k.neg(c) } else { c.clone() };
            let coef = if k.is_one(&abs) { String::new() } else { format!("{}*", k.format(&abs)) };
            match (s.is_empty(), neg) {
                (true, false) => {}
                (true, true) => s.push('-'),
                (false, false) => s.push_str(" + "),
                (false, true) => s.push_str(" - "),
            }
            s.push_str(&coef);
            s.push_str(&self.labels[i]);
        }
        if s.is_empty() {
            s.push('0');
        }
        s
    }

    /// `dim n over Q|Fp` followed by one `e_i * e_j = …` line per nonzero product.
    pub fn to_text(&self) -> String {
        let k = &self.field;
        let mut out = format!("dim {} over {}\n", self.dim(), kind_token(k.kind()));
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let row = &self.table[i][j];
                if row.is_empty() {
                    continue;
                }
                let terms: Vec<String> = row
                    .iter()
                    .map(|(t, c)| format!("{} e_{}", k.format(c), t + 1))
                    .collect();
                out.push_str(&format!("e_{} * e_{} = {}\n", i + 1, j + 1, terms.join(" + ")));
            }
        }
        out
    }

    pub fn parse(field: F, text: &str) -> Result<Self, ActionError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
        let (n, kind) = parse_header(hl, header)?;
        if kind != field.kind() {
            return Err(ActionError::FieldMismatch {
                expected: field.kind(),
                found: kind,
            });
        }
        let mut alg = Self::with_dim(field, n);
        for (ln, line) in lines {
            let (lhs, rhs) = line
                .split_once('=')
                .ok_or_else(|| parse_err(ln, "expected 'e_i * e_j = …'"))?;
            let (a, b) = lhs
                .split_once('*')
                .ok_or_else(|| parse_err(ln, "expected '*' on the left"))?;
            let i = basis_index(ln, a, n)?;
            let j = basis_index(ln, b, n)?;
            let mut v = alg.zero_vec();
            for term in rhs.replace('-', "+-").split('+') {
                let term = term.trim();
                if term.is_empty() || term == "0" {
                    continue;
                }
                let at = term
                    .find("e_")
                    .ok_or_else(|| parse_err(ln, format!("term '{term}' has no basis element")))?;
                let t = basis_index(ln, &term[at..], n)?;
                let coef = term[..at].trim().trim_end_matches('*').trim();
                let c = match coef {
                    "" => alg.field.one(),
                    "-" => alg.field.neg(&alg.field.one()),
                    _ => alg
                        .field
                        .parse(&coef.replace(' ', ""))
                        .map_err(|e| parse_err(ln, e.to_string()))?,
                };
                v[t] = alg.field.add(&v[t], &c);
            }
            alg.set_product(i, j, &v)?;
        }
        Ok(alg)
    }
}

fn kind_token(k: FieldKind) -> String {
    match k {
        FieldKind::Q => "Q".to_string(),
        FieldKind::Fp(p) => format!("F{p}"),
    }
}

/// Reads `dim n over Q|Fp` from the first line of an algebra file.
pub fn parse_header(line: usize, header: &str) -> Result<(usize, FieldKind), ActionError> {
    let words: Vec<&str> = header.split_whitespace().collect();
    match words.as_slice() {
        ["dim", n, "over", f] => {
            let n = n.parse().map_err(|_| parse_err(line, "bad dimension"))?;
            let kind = match *f {
                "Q" => FieldKind::Q,
                f => {
                    let p = f
                        .strip_prefix('F')
                        .and_then(|p| p.parse().ok())
                        .ok_or_else(|| parse_err(line, format!("unknown field {f}")))?;
                    FieldKind::from_characteristic(p).map_err(|e| parse_err(line, e.to_string()))?
                }
            };
            Ok((n, kind))
        }
        _ => Err(parse_err(line, "expected 'dim n over Q|Fp'")),
    }
}

fn basis_index(line: usize, s: &str, n: usize) -> Result<usize, ActionError> {
    let i: usize = s
        .trim()
        .strip_prefix("e_")
        .and_then(|d| d.trim().parse().ok())
        .ok_or_else(|| parse_err(line, format!("expected e_i, got '{}'", s.trim())))?;
    if i == 0 || i > n {
        return Err(parse_err(line, format!("e_{i} is outside 1..{n}")));
    }
    Ok(i - 1)
}

fn sparse<F: Field>(k: &F, v: &[F::Elem]) -> Vec<(usize, F::Elem)> {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !k.is_zero(c))
        .map(|(i, c)| (i, c.clone()))
        .collect()
}

/// Images ᵍeᵢ and eᵢᵍ of the module basis under each actor g.
#[derive(Clone, Debug)]
pub struct ActionTable<F: Field> {
    pub actors: Vec<String>,
    pub left: Vec<Vec<Vec<F::Elem>>>,
    pub right: Vec<Vec<Vec<F::Elem>>>,
}

impl<F: Field> ActionTable<F> {
    /// The zero action of `actors` on a module of dimension `dim`.
    pub fn zero(field: &F, actors: Vec<String>, dim: usize) -> Self {
        let z = vec![vec![vec![field.zero(); dim]; dim]; actors.len()];
        ActionTable {
            actors,
            left: z.clone(),
            right: z,
        }
    }

    pub fn module_dim(&self) -> usize {
        self.left.first().map_or(0, Vec::len)
    }

    fn apply(k: &F, rows: &[Vec<F::Elem>], v: &[F::Elem]) -> Vec<F::Elem> {
        let mut out = vec![k.zero(); v.len()];
        for (i, a) in v.iter().enumerate().filter(|(_, a)| !k.is_zero(a)) {
            for (t, c) in rows[i].iter().enumerate().filter(|(_, c)| !k.is_zero(c)) {
                out[t] = k.add(&out[t], &k.mul(a, c));
            }
        }
        out
    }

    pub fn act_left(&self, k: &F, g: usize, v: &[F::Elem]) -> Vec<F::Elem> {
        Self::apply(k, &self.left[g], v)
    }

    pub fn act_right(&self, k: &F, g: usize, v: &[F::Elem]) -> Vec<F::Elem> {
        Self::apply(k, &self.right[g], v)
    }
}

/// B ⋉ X on B ⊕ X with (b,x)(c,y) = (bc, ᵇy + xᶜ + xy). The table gives
/// the action of every basis element of B.
pub fn semidirect<F: Field>(
    b: &FinAlgebra<F>,
    x: &FinAlgebra<F>,
    act: &ActionTable<F>,
) -> Result<FinAlgebra<F>, ActionError> {
    if act.actors.len() != b.dim() {
        return Err(ActionError::DimensionMismatch {
            expected: b.dim(),
            got: act.actors.len(),
        });
    }
    if act.module_dim() != x.dim() && b.dim() > 0 {
        return Err(ActionError::DimensionMismatch {
            expected: x.dim(),
            got: act.module_dim(),
        });
    }
    let (nb, nx) = (b.dim(), x.dim());
    let mut labels = b.labels.clone();
    labels.extend(x.labels.iter().cloned());
    let mut out = FinAlgebra::abelian(b.field.clone(), labels);
    let shift = |v: &[(usize, F::Elem)], by: usize| v.iter().map(|(i, c)| (i + by, c.clone())).collect();
    let k = &b.field;
    for i in 0..nb {
        for j in 0..nb {
            out.table[i][j] = shift(&b.table[i][j], 0);
        }
        for j in 0..nx {
            out.table[i][nb + j] = shift(&sparse(k, &act.left[i][j]), nb);
            out.table[nb + j][i] = shift(&sparse(k, &act.right[i][j]), nb);
        }
    }
    for i in 0..nx {
        for j in 0..nx {
            out.table[nb + i][nb + j] = shift(&x.table[i][j], nb);
        }
    }
    Ok(out)
}

/// The part of (B¹ + ⋯ + Bⁿ) ⋉ X reachable from words of length at most
/// `cap`, for one-dimensional abelian Bⁱ = ⟨bⁱ⟩.
///
/// The B-part is spanned by alternating words bⁱ¹bⁱ²⋯ (adjacent letters
/// differ, since (bⁱ)² = 0), multiplied by concatenation; words longer
/// than `cap` are zero. A word acts on X by composing the generator
/// actions: w = g₁⋯g_k sends x to g₁(⋯(g_k x)) on the left and to
/// ((x g₁)⋯)g_k on the right.
pub fn free_product_partial<F: Field>(
    bs: &[FinAlgebra<F>],
    x: &FinAlgebra<F>,
    acts: &[ActionTable<F>],
    cap: usize,
) -> Result<FinAlgebra<F>, ActionError> {
    if cap == 0 {
        return Err(ActionError::ZeroCap);
    }
    if acts.len() != bs.len() {
        return Err(ActionError::DimensionMismatch {
            expected: bs.len(),
            got: acts.len(),
        });
    }
    for (i, (b, a)) in bs.iter().zip(acts).enumerate() {
        if b.dim() != 1 || !b.is_abelian() {
            return Err(ActionError::NotAbelianOneGenerated(i));
        }
        if a.actors.len() != 1 {
            return Err(ActionError::NotSingleActor(i));
        }
        if a.module_dim() != x.dim() {
            return Err(ActionError::DimensionMismatch {
                expected: x.dim(),
                got: a.module_dim(),
            });
        }
    }
    let k = x.field.clone();
    let n = bs.len();
    let mut words: Vec<Vec<usize>> = (0..n).map(|g| vec![g]).collect();
    let mut layer = words.clone();
    for _ in 1..cap {
        let next: Vec<Vec<usize>> = layer
            .iter()
            .flat_map(|w| {
                (0..n).filter(move |&g| g != *w.last().unwrap()).map(move |g| {
                    let mut v = w.clone();
                    v.push(g);
                    v
                })
            })
            .collect();
        words.extend(next.iter().cloned());
        layer = next;
    }
    let index: HashMap<Vec<usize>, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let nw = words.len();
    let mut labels: Vec<String> = words
        .iter()
        .map(|w| w.iter().map(|&g| bs[g].labels[0].as_str()).collect::<String>())
        .collect();
    labels.extend(x.labels.iter().cloned());
    let mut out = FinAlgebra::abelian(k.clone(), labels);
    let one = k.one();
    for (i, u) in words.iter().enumerate() {
        for (j, v) in words.iter().enumerate() {
            if u.last() == v.first() || u.len() + v.len() > cap {
                continue;
            }
            let mut uv = u.clone();
            uv.extend(v);
            out.table[i][j] = vec![(index[&uv], one.clone())];
        }
        for j in 0..x.dim() {
            let mut l = x.basis_vec(j);
            for &g in u.iter().rev() {
                l = acts[g].act_left(&k, 0, &l);
            }
            let mut r = x.basis_vec(j);
            for &g in u {
                r = acts[g].act_right(&k, 0, &r);
            }
            out.table[i][nw + j] = sparse(&k, &l).into_iter().map(|(t, c)| (t + nw, c)).collect();
            out.table[nw + j][i] = sparse(&k, &r).into_iter().map(|(t, c)| (t + nw, c)).collect();
        }
    }
    for i in 0..x.dim() {
        for j in 0..x.dim() {
            out.table[nw + i][nw + j] = x.table[i][j].iter().map(|(t, c)| (t + nw, c.clone())).collect();
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    MultilinearBasis,
    PolarizeFirst,
}

/// A basis tuple on which the two sides differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness<E> {
    pub tuple: Vec<usize>,
    pub lhs: Vec<E>,
    pub rhs: Vec<E>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdentityCheck<E> {
    Holds,
    Fails(Witness<E>),
}

impl<E> IdentityCheck<E> {
    pub fn holds(&self) -> bool {
        matches!(self, IdentityCheck::Holds)
    }
}

/// Checks a multilinear identity on every basis tuple, in lexicographic
/// order; the first failing tuple is the witness. In `PolarizeFirst` mode a
/// homogeneous identity is polarized first.
pub fn check_identity<F: Field>(
    a: &FinAlgebra<F>,
    id: &Identity<F>,
    mode: CheckMode,
) -> Result<IdentityCheck<F::Elem>, ActionError> {
    let (lhs, rhs) = match mode {
        CheckMode::MultilinearBasis => {
            let ok = |p: &NonAssocPoly<F>| p.is_zero() || p.is_multilinear();
            if !ok(&id.lhs) || !ok(&id.rhs) || !ok(&id.poly()) {
                return Err(ActionError::NotMultilinear);
            }
            (id.lhs.clone(), id.rhs.clone())
        }
        CheckMode::PolarizeFirst => {
            let p = id.poly();
            let degree = id.degree();
            let c = a.field.characteristic();
            if c != 0 && c as usize <= degree {
                return Err(ActionError::CharacteristicTooSmall {
                    characteristic: c,
                    degree,
                });
            }
            let ty = if p.is_zero() {
                return Ok(IdentityCheck::Holds);
            } else {
                p.homogeneous_type().ok_or(ActionError::NotHomogeneous)?
            };
            (id.lhs.polarize_as(&ty)?.poly, id.rhs.polarize_as(&ty)?.poly)
        }
    };
    let arity = lhs.alphabet().len();
    let n = a.dim();
    if n == 0 {
        return Ok(IdentityCheck::Holds);
    }
    let mut tuple = vec![0usize; arity];
    loop {
        let l = eval(a, &lhs, &tuple);
        let r = eval(a, &rhs, &tuple);
        if l != r {
            return Ok(IdentityCheck::Fails(Witness { tuple, lhs: l, rhs: r }));
        }
        // odometer with the last position fastest, so the sweep is lexicographic
        let mut pos = arity;
        loop {
            if pos == 0 {
                return Ok(IdentityCheck::Holds);
            }
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] < n {
                break;
            }
            tuple[pos] = 0;
        }
    }
}

/// Value of `p` with the i-th alphabet letter sent to basis vector `tuple[i]`.
pub fn eval<F: Field>(a: &FinAlgebra<F>, p: &NonAssocPoly<F>, tuple: &[usize]) -> Vec<F::Elem> {
    let k = &a.field;
    let mut out = a.zero_vec();
    for (w, c) in p.terms() {
        let v = eval_word(a, p, w, tuple);
        for (o, x) in out.iter_mut().zip(&v) {
            *o = k.add(o, &k.mul(c, x));
        }
    }
    out
}

fn eval_word<F: Field>(a: &FinAlgebra<F>, p: &NonAssocPoly<F>, w: &MagmaWord, tuple: &[usize]) -> Vec<F::Elem> {
    match w.children() {
        None => {
            let g = w.as_leaf().unwrap();
            let i = p.alphabet().iter().position(|x| x == g).unwrap();
            a.basis_vec(tuple[i])
        }
        Some((l, r)) => a.mul(&eval_word(a, p, l, tuple), &eval_word(a, p, r, tuple)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DerivationCheck<E> {
    Yes,
    /// D(eᵢeⱼ) against D(eᵢ)eⱼ + eᵢD(eⱼ) at the first failing pair.
    No {
        pair: (usize, usize),
        lhs: Vec<E>,
        rhs: Vec<E>,
    },
}

/// Row i of `d` is D(eᵢ).
pub fn is_derivation<F: Field>(a: &FinAlgebra<F>, d: &[Vec<F::Elem>]) -> Result<DerivationCheck<F::Elem>, ActionError> {
    let n = a.dim();
    if d.len() != n {
        return Err(ActionError::DimensionMismatch { expected: n, got: d.len() });
    }
    if let Some(row) = d.iter().find(|r| r.len() != n) {
        return Err(ActionError::DimensionMismatch {
            expected: n,
            got: row.len(),
        });
    }
    let k = &a.field;
    let apply = |v: &[F::Elem]| ActionTable::<F>::apply(k, d, v);
    for i in 0..n {
        for j in 0..n {
            let lhs = apply(&a.product(i, j));
            let p = a.mul(&d[i], &a.basis_vec(j));
            let q = a.mul(&a.basis_vec(i), &d[j]);
            let rhs: Vec<F::Elem> = p.iter().zip(&q).map(|(x, y)| k.add(x, y)).collect();
            if lhs != rhs {
                return Ok(DerivationCheck::No { pair: (i, j), lhs, rhs });
            }
        }
    }
    Ok(DerivationCheck::Yes)
}

/// Data of the associative counterexample: B¹ = ⟨b1⟩, B² = ⟨b2⟩ and the
/// abelian X = ⟨x, y1, y2, z12, z21⟩ with bⁱx = xbⁱ = yⁱ and
/// bⁱyʲ = yʲbⁱ = zⁱʲ for i ≠ j, everything else zero.
pub fn coproduct_counterexample<F: Field>(field: F) -> (Vec<FinAlgebra<F>>, FinAlgebra<F>, Vec<ActionTable<F>>) {
    let labels = ["x", "y1", "y2", "z12", "z21"].map(String::from).to_vec();
    let x = FinAlgebra::abelian(field.clone(), labels);
    let bs: Vec<FinAlgebra<F>> = (1..=2)
        .map(|i| FinAlgebra::abelian(field.clone(), vec![format!("b{i}")]))
        .collect();
    let at = |s: &str| x.index_of(s).unwrap();
    let acts = (1..=2)
        .map(|i: usize| {
            let mut t = ActionTable::zero(&field, vec![format!("b{i}")], x.dim());
            let j = 3 - i;
            let images = [("x", format!("y{i}")), (&*format!("y{j}"), format!("z{i}{j}"))];
            for (src, dst) in images {
                t.left[0][at(src)] = x.basis_vec(at(&dst));
                t.right[0][at(src)] = x.basis_vec(at(&dst));
            }
            t
        })
        .collect();
    (bs, x, acts)
}
