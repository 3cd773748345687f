//! Exact root data and Weyl group combinatorics for type A_r.
//!
//! The realization is the usual one inside sl(r+1): the root
//! `lambda_i - lambda_j` has root space spanned by the matrix unit `E_ij`,
//! the simple roots are `alpha_k = lambda_k - lambda_{k+1}` and the coroot of
//! `lambda_i - lambda_j` is `E_ii - E_jj`. Indices are 0-based in code and
//! 1-based in anything user facing (one-line notation, JSON words).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The functional `lambda_i - lambda_j` (`i != j`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootPair {
    pub i: usize,
    pub j: usize,
}

impl RootPair {
    pub fn new(i: usize, j: usize) -> Self {
        debug_assert_ne!(i, j);
        RootPair { i, j }
    }

    pub fn simple(k: usize) -> Self {
        RootPair { i: k, j: k + 1 }
    }

    pub fn is_positive(&self) -> bool {
        self.i < self.j
    }

    pub fn negate(&self) -> Self {
        RootPair { i: self.j, j: self.i }
    }

    /// `self(h_coroot)` where `h_coroot = E_cc - E_dd`.
    pub fn pairing(&self, coroot: RootPair) -> i64 {
        let eval = |k: usize| -> i64 { (k == coroot.i) as i64 - (k == coroot.j) as i64 };
        eval(self.i) - eval(self.j)
    }

    /// Coefficients over the simple roots (negative for negative roots).
    pub fn coeffs(&self, rank: usize) -> Vec<i64> {
        let (lo, hi, sign) = if self.is_positive() {
            (self.i, self.j, 1)
        } else {
            (self.j, self.i, -1)
        };
        (0..rank).map(|k| if lo <= k && k < hi { sign } else { 0 }).collect()
    }

    /// Sum of two roots when it is again a root.
    pub fn add(&self, other: RootPair) -> Option<RootPair> {
        if self.j == other.i && self.i != other.j {
            Some(RootPair::new(self.i, other.j))
        } else if other.j == self.i && other.i != self.j {
            Some(RootPair::new(other.i, self.j))
        } else {
            None
        }
    }
}

impl fmt::Display for RootPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "l{}-l{}", self.i + 1, self.j + 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RootKind {
    Compact,
    Noncompact,
    Untyped,
}

impl RootKind {
    /// Compact and untyped roots carry plane coordinates; noncompact
    /// roots carry disk coordinates.
    pub fn is_noncompact(&self) -> bool {
        matches!(self, RootKind::Noncompact)
    }
}

/// A positive root with its simple-root expansion and type.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Root {
    pub pair: RootPair,
    pub coeffs: Vec<i64>,
    pub height: i64,
    pub kind: RootKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSystem {
    pub rank: usize,
    /// Ordered by height, then by the position of the first nonzero
    /// coefficient. Simple roots come first, in index order.
    pub positive_roots: Vec<Root>,
    /// Indices into `positive_roots` of `alpha_1 .. alpha_r`.
    pub simple_roots: Vec<usize>,
    /// `delta(h_tau)` for each positive root, aligned with `positive_roots`.
    pub delta: Vec<i64>,
    pub signature: Option<(usize, usize)>,
}

/// Builds the root system of A_rank, typed by `(p, q)` when given.
pub fn build_root_system(rank: usize, signature: Option<(usize, usize)>) -> Result<RootSystem> {
    if rank == 0 {
        return Err(Error::Config("rank must be at least 1".into()));
    }
    if let Some((p, q)) = signature {
        if p == 0 || q == 0 || p + q != rank + 1 {
            return Err(Error::Config(format!(
                "signature ({p},{q}) needs p >= 1, q >= 1 and p + q = {}",
                rank + 1
            )));
        }
    }
    let n = rank + 1;
    let mut pairs: Vec<RootPair> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| RootPair::new(i, j)))
        .collect();
    pairs.sort_by_key(|r| (r.j - r.i, r.i));

    let positive_roots: Vec<Root> = pairs
        .iter()
        .map(|&pair| {
            let coeffs = pair.coeffs(rank);
            let height = coeffs.iter().sum();
            let kind = match signature {
                None => RootKind::Untyped,
                Some((p, _)) => {
                    if (pair.i < p) == (pair.j < p) {
                        RootKind::Compact
                    } else {
                        RootKind::Noncompact
                    }
                }
            };
            Root { pair, coeffs, height, kind }
        })
        .collect();

    let simple_roots = (0..rank)
        .map(|k| {
            positive_roots
                .iter()
                .position(|r| r.pair == RootPair::simple(k))
                .expect("simple root present")
        })
        .collect();

    // 2 delta(h) = sum of all positive roots evaluated on h
    let delta = positive_roots
        .iter()
        .map(|tau| {
            let twice: i64 = positive_roots.iter().map(|b| b.pair.pairing(tau.pair)).sum();
            debug_assert_eq!(twice % 2, 0);
            twice / 2
        })
        .collect();

    Ok(RootSystem {
        rank,
        positive_roots,
        simple_roots,
        delta,
        signature,
    })
}

impl RootSystem {
    /// Matrix size `r + 1`.
    pub fn n(&self) -> usize {
        self.rank + 1
    }

    pub fn index_of(&self, pair: RootPair) -> Option<usize> {
        self.positive_roots.iter().position(|r| r.pair == pair)
    }

    pub fn root(&self, pair: RootPair) -> Option<&Root> {
        self.positive_roots.iter().find(|r| r.pair == pair)
    }

    /// Type of a positive root; `Untyped` without a signature.
    pub fn kind(&self, pair: RootPair) -> RootKind {
        self.root(pair).map(|r| r.kind).unwrap_or(RootKind::Untyped)
    }

    pub fn delta_of(&self, pair: RootPair) -> i64 {
        self.index_of(pair).map(|k| self.delta[k]).unwrap_or(0)
    }

    pub fn simple_kind(&self, k: usize) -> RootKind {
        self.kind(RootPair::simple(k))
    }

    /// Longest element `w0`.
    pub fn longest(&self) -> WeylElement {
        WeylElement::longest(self.n())
    }

    pub fn require_signature(&self) -> Result<(usize, usize)> {
        self.signature
            .ok_or_else(|| Error::Config("operation needs a signature (p,q)".into()))
    }
}

/// A permutation of `{0, .., n-1}`; `w(i) = perm[i]`.
///
/// The matrix model sends `e_i` to `e_{w(i)}`, so the induced action on
/// roots is `w . (lambda_i - lambda_j) = lambda_{w(i)} - lambda_{w(j)}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylElement {
    perm: Vec<usize>,
}

impl WeylElement {
    pub fn identity(n: usize) -> Self {
        WeylElement { perm: (0..n).collect() }
    }

    pub fn simple(n: usize, k: usize) -> Self {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(k, k + 1);
        WeylElement { perm }
    }

    pub fn longest(n: usize) -> Self {
        WeylElement {
            perm: (0..n).rev().collect(),
        }
    }

    pub fn from_perm(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(Error::Config(format!("{perm:?} is not a permutation")));
            }
            seen[p] = true;
        }
        Ok(WeylElement { perm })
    }

    /// Parses one-line notation with 1-based entries.
    pub fn from_one_line(entries: &[usize]) -> Result<Self> {
        if entries.contains(&0) {
            return Err(Error::Config("one-line notation is 1-based".into()));
        }
        Self::from_perm(entries.iter().map(|e| e - 1).collect())
    }

    /// Accepts `"213"`, `"2,1,3"` or `"2 1 3"`.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let text = text.trim();
        let entries: Vec<usize> = if text.contains(',') || text.contains(' ') {
            text.split([',', ' '])
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Config(format!("bad permutation {text:?}: {e}")))?
        } else {
            text.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as usize)
                        .ok_or_else(|| Error::Config(format!("bad permutation {text:?}")))
                })
                .collect::<Result<_>>()?
        };
        if entries.len() != n {
            return Err(Error::Config(format!(
                "permutation {text:?} has {} entries, expected {n}",
                entries.len()
            )));
        }
        Self::from_one_line(&entries)
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.perm.iter().map(|p| p + 1).collect()
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.perm[i]
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    /// `self * other` (apply `other` first).
    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        WeylElement {
            perm: other.perm.iter().map(|&k| self.perm[k]).collect(),
        }
    }

    pub fn inverse(&self) -> WeylElement {
        let mut perm = vec![0; self.perm.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            perm[p] = i;
        }
        WeylElement { perm }
    }

    pub fn times_simple(&self, k: usize) -> WeylElement {
        let mut perm = self.perm.clone();
        perm.swap(k, k + 1);
        WeylElement { perm }
    }

    pub fn act(&self, root: RootPair) -> RootPair {
        RootPair::new(self.perm[root.i], self.perm[root.j])
    }

    /// Inversion count.
    pub fn length(&self) -> usize {
        let n = self.perm.len();
        (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.perm[i] > self.perm[j])
            .count()
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// Reduced word `w = s_{k_1} ... s_{k_l}` built by peeling the smallest
    /// right descent.
    pub fn canonical_word(&self) -> Vec<usize> {
        let mut rest = self.clone();
        let mut word = Vec::with_capacity(self.length());
        while let Some(k) = (0..rest.n().saturating_sub(1)).find(|&k| rest.perm[k] > rest.perm[k + 1]) {
            word.push(k);
            rest = rest.times_simple(k);
        }
        word.reverse();
        word
    }

    /// All permutations of `{0..n-1}` in lexicographic order.
    pub fn all(n: usize) -> Vec<WeylElement> {
        let mut out = Vec::new();
        let mut perm: Vec<usize> = (0..n).collect();
        loop {
            out.push(WeylElement { perm: perm.clone() });
            // next permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else {
                break;
            };
            let j = ((i + 1)..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
            perm.swap(i, j);
            perm[i + 1..].reverse();
        }
        out
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_line().iter().map(|p| p.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl Serialize for WeylElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_line().serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeylElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<usize>::deserialize(d)?;
        WeylElement::from_one_line(&entries).map_err(serde::de::Error::custom)
    }
}

/// A reduced factorization attached to a Weyl element.
///
/// For words from [`reduced_word_for`], `taus` are the positive roots left
/// positive by `target` and `target * r_1 ... r_n = w0`. For words from
/// [`bruhat_word_for`], `taus` are the roots flipped by `target` and
/// `target * r_1 ... r_n = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReducedWordData {
    pub target: WeylElement,
    /// 0-based simple root indices `gamma_1 .. gamma_n`.
    pub gammas: Vec<usize>,
    /// `tau_j = r_1 .. r_{j-1} . gamma_j`.
    pub taus: Vec<RootPair>,
    /// `w'_j = r_j .. r_1` for `j = 0..=n`.
    pub prefixes: Vec<WeylElement>,
}

impl ReducedWordData {
    pub fn len(&self) -> usize {
        self.gammas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gammas.is_empty()
    }

    pub fn n(&self) -> usize {
        self.target.n()
    }

    /// 1-based simple-root indices, the JSON form of a word.
    pub fn gamma_indices(&self) -> Vec<usize> {
        self.gammas.iter().map(|g| g + 1).collect()
    }

    /// Rebuilds the data from 1-based simple root indices, recovering the
    /// target `w = w0 r_n .. r_1` and checking each step lengthens `w r_1 .. r_j`.
    pub fn from_gamma_indices(rank: usize, indices: &[usize]) -> Result<Self> {
        let n = rank + 1;
        if indices.iter().any(|&g| g == 0 || g > rank) {
            return Err(Error::Config(format!(
                "word {indices:?} uses simple roots outside 1..={rank}"
            )));
        }
        let gammas: Vec<usize> = indices.iter().map(|g| g - 1).collect();
        let mut tail = WeylElement::identity(n);
        for &g in &gammas {
            tail = tail.times_simple(g);
        }
        let target = WeylElement::longest(n).compose(&tail.inverse());
        let data = assemble(target, &gammas);
        let w = &data.target;
        let mut running = w.clone();
        for (&g, _) in gammas.iter().zip(&data.taus) {
            if !running.act(RootPair::simple(g)).is_positive() {
                return Err(Error::Config(format!(
                    "word {indices:?} is not an admissible factorization"
                )));
            }
            running = running.times_simple(g);
        }
        Ok(data)
    }
}

fn assemble(target: WeylElement, gammas: &[usize]) -> ReducedWordData {
    let n = target.n();
    let mut taus = Vec::with_capacity(gammas.len());
    let mut prefixes = vec![WeylElement::identity(n)];
    // r_1 .. r_{j-1} as a permutation
    let mut head = WeylElement::identity(n);
    for &g in gammas {
        taus.push(head.act(RootPair::simple(g)));
        head = head.times_simple(g);
        let last = prefixes.last().unwrap();
        prefixes.push(WeylElement::simple(n, g).compose(last));
    }
    ReducedWordData {
        target,
        gammas: gammas.to_vec(),
        taus,
        prefixes,
    }
}

fn word_by_rule<F>(rs: &RootSystem, w: &WeylElement, keep_positive: bool, mut choose: F) -> ReducedWordData
where
    F: FnMut(&[usize]) -> usize,
{
    let mut running = w.clone();
    let mut gammas = Vec::new();
    loop {
        let candidates: Vec<usize> = (0..rs.rank)
            .filter(|&k| running.act(RootPair::simple(k)).is_positive() == keep_positive)
            .collect();
        if candidates.is_empty() {
            break;
        }
        let pick = choose(&candidates);
        assert!(candidates.contains(&pick), "chooser returned inadmissible root");
        gammas.push(pick);
        running = running.times_simple(pick);
    }
    assemble(w.clone(), &gammas)
}

/// Factorization with the smallest admissible simple root at each step.
pub fn reduced_word_for(rs: &RootSystem, w: &WeylElement) -> ReducedWordData {
    word_by_rule(rs, w, true, |c| c[0])
}

/// Same algorithm with a caller-supplied choice among admissible roots.
pub fn reduced_word_with<F>(rs: &RootSystem, w: &WeylElement, choose: F) -> ReducedWordData
where
    F: FnMut(&[usize]) -> usize,
{
    word_by_rule(rs, w, true, choose)
}

/// Every factorization the algorithm can produce for `w`.
pub fn all_reduced_words(rs: &RootSystem, w: &WeylElement) -> Vec<ReducedWordData> {
    fn walk(rs: &RootSystem, running: &WeylElement, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let candidates: Vec<usize> = (0..rs.rank)
            .filter(|&k| running.act(RootPair::simple(k)).is_positive())
            .collect();
        if candidates.is_empty() {
            out.push(acc.clone());
            return;
        }
        for k in candidates {
            acc.push(k);
            walk(rs, &running.times_simple(k), acc, out);
            acc.pop();
        }
    }
    let mut words = Vec::new();
    walk(rs, w, &mut Vec::new(), &mut words);
    words.into_iter().map(|g| assemble(w.clone(), &g)).collect()
}

/// Minimal factorization `w' = r_n .. r_1` picking roots that `w' r_1 ..`
/// sends negative; `taus` are the flipped roots.
pub fn bruhat_word_for(rs: &RootSystem, w_prime: &WeylElement) -> ReducedWordData {
    word_by_rule(rs, w_prime, false, |c| c[0])
}

/// `(delta(h_{tau_m}) - 1, sum_{k<m} tau_k(h_{tau_m}))` for every position m.
pub fn verify_delta_identity(rs: &RootSystem, word: &ReducedWordData) -> Vec<(i64, i64)> {
    word.taus
        .iter()
        .enumerate()
        .map(|(m, &tau)| {
            let lhs = rs.delta_of(tau) - 1;
            let rhs = word.taus[..m].iter().map(|t| t.pairing(tau)).sum();
            (lhs, rhs)
        })
        .collect()
}

/// Whether `w` preserves the blocks `{1..p}` and `{p+1..p+q}`.
pub fn is_in_wk(rs: &RootSystem, w: &WeylElement) -> Result<bool> {
    let (p, _) = rs.require_signature()?;
    Ok(w.perm().iter().enumerate().all(|(i, &wi)| (i < p) == (wi < p)))
}

/// Elements of W(K) = S_p x S_q.
pub fn weyl_group_k(rs: &RootSystem) -> Result<Vec<WeylElement>> {
    let all = WeylElement::all(rs.n());
    let mut out = Vec::new();
    for w in all {
        if is_in_wk(rs, &w)? {
            out.push(w);
        }
    }
    Ok(out)
}
