//! Labeled, reduced and generalized permutations, and the combinatorial
//! Rauzy moves acting on them.
//!
//! A labeled permutation is stored as its two-row table: `top[k]` is the
//! letter of the `k`-th interval before the exchange and `bottom[k]` the
//! letter of the `k`-th interval after it. The older `(pi_0, pi_1)` notation
//! is the same pair: `pi_0` is the top row and `pi_1` the bottom row.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A letter of the alphabet. Letters print as their numeric id.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Letter(pub u32);

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for Letter {
    fn from(id: u32) -> Self {
        Letter(id)
    }
}

/// The type of a Rauzy-Veech step: `t` when the last top interval wins,
/// `b` when the last bottom interval wins.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MoveType {
    #[serde(rename = "t")]
    Top,
    #[serde(rename = "b")]
    Bottom,
}

impl PartialOrd for MoveType {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Moves order like their letters: `b < t`.
impl Ord for MoveType {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.as_char().cmp(&other.as_char())
    }
}

impl MoveType {
    pub const BOTH: [MoveType; 2] = [MoveType::Top, MoveType::Bottom];

    pub fn as_char(self) -> char {
        match self {
            MoveType::Top => 't',
            MoveType::Bottom => 'b',
        }
    }

    pub fn other(self) -> MoveType {
        match self {
            MoveType::Top => MoveType::Bottom,
            MoveType::Bottom => MoveType::Top,
        }
    }

    /// Index used for per-vertex edge arrays: `t` is 0, `b` is 1.
    pub fn index(self) -> usize {
        match self {
            MoveType::Top => 0,
            MoveType::Bottom => 1,
        }
    }

    pub fn from_char(c: char) -> Result<MoveType> {
        match c {
            't' => Ok(MoveType::Top),
            'b' => Ok(MoveType::Bottom),
            _ => Err(Error::Parse(format!("unknown move {c:?}, expected 't' or 'b'"))),
        }
    }
}

impl fmt::Display for MoveType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Parses a move word such as `"tbbt"`. Whitespace and `-` separators are ignored.
pub fn parse_moves(word: &str) -> Result<Vec<MoveType>> {
    word.chars()
        .filter(|c| !c.is_whitespace() && *c != '-')
        .map(MoveType::from_char)
        .collect()
}

pub fn moves_to_string(moves: &[MoveType]) -> String {
    moves.iter().map(|m| m.as_char()).collect()
}

/// Result of one combinatorial Rauzy move.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Move {
    pub target: LabeledPermutation,
    pub winner: Letter,
    pub loser: Letter,
}

#[derive(Serialize, Deserialize)]
struct RawTable {
    top: Vec<Letter>,
    bottom: Vec<Letter>,
}

/// A labeled permutation `(pi_t, pi_b)` stored as its two-row table.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawTable", into = "RawTable")]
pub struct LabeledPermutation {
    top: Vec<Letter>,
    bottom: Vec<Letter>,
    alphabet: Vec<Letter>,
}

impl TryFrom<RawTable> for LabeledPermutation {
    type Error = Error;

    fn try_from(raw: RawTable) -> Result<Self> {
        LabeledPermutation::new(raw.top, raw.bottom)
    }
}

impl From<LabeledPermutation> for RawTable {
    fn from(p: LabeledPermutation) -> Self {
        RawTable { top: p.top, bottom: p.bottom }
    }
}

impl LabeledPermutation {
    pub fn new(top: Vec<Letter>, bottom: Vec<Letter>) -> Result<Self> {
        if top.len() < 2 {
            return Err(Error::InvalidPermutation(format!(
                "alphabet must have at least 2 letters, got {}",
                top.len()
            )));
        }
        if top.len() != bottom.len() {
            return Err(Error::InvalidPermutation("rows have different lengths".into()));
        }
        let mut alphabet = top.clone();
        alphabet.sort_unstable();
        if alphabet.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidPermutation("repeated letter in top row".into()));
        }
        let mut check = bottom.clone();
        check.sort_unstable();
        if check != alphabet {
            return Err(Error::InvalidPermutation(
                "top and bottom rows are not bijections onto the same alphabet".into(),
            ));
        }
        Ok(LabeledPermutation { top, bottom, alphabet })
    }

    pub fn from_ids(top: &[u32], bottom: &[u32]) -> Result<Self> {
        Self::new(
            top.iter().copied().map(Letter).collect(),
            bottom.iter().copied().map(Letter).collect(),
        )
    }

    /// Number of letters `d`.
    pub fn len(&self) -> usize {
        self.top.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn top(&self) -> &[Letter] {
        &self.top
    }

    pub fn bottom(&self) -> &[Letter] {
        &self.bottom
    }

    /// The letters in increasing order. Matrices and length vectors are
    /// indexed by position in this list.
    pub fn alphabet(&self) -> &[Letter] {
        &self.alphabet
    }

    pub fn letter_index(&self, letter: Letter) -> Option<usize> {
        self.alphabet.binary_search(&letter).ok()
    }

    /// 0-based position of `letter` in the top row.
    pub fn top_position(&self, letter: Letter) -> Option<usize> {
        self.top.iter().position(|&a| a == letter)
    }

    /// 0-based position of `letter` in the bottom row.
    pub fn bottom_position(&self, letter: Letter) -> Option<usize> {
        self.bottom.iter().position(|&a| a == letter)
    }

    pub fn top_last(&self) -> Letter {
        self.top[self.len() - 1]
    }

    pub fn bottom_last(&self) -> Letter {
        self.bottom[self.len() - 1]
    }

    /// True iff no proper prefix of the top row spans the same letters as the
    /// prefix of the bottom row of the same length.
    pub fn is_irreducible(&self) -> bool {
        let d = self.len();
        let mut balance: BTreeMap<Letter, i32> = BTreeMap::new();
        let mut open = 0i32;
        for k in 0..d - 1 {
            for (letter, delta) in [(self.top[k], 1), (self.bottom[k], -1)] {
                let e = balance.entry(letter).or_insert(0);
                if *e == 0 {
                    open += 1;
                }
                *e += delta;
                if *e == 0 {
                    open -= 1;
                }
            }
            if open == 0 {
                return false;
            }
        }
        true
    }

    /// Winner and loser of a move of type `eps`.
    pub fn winner_loser(&self, eps: MoveType) -> (Letter, Letter) {
        match eps {
            MoveType::Top => (self.top_last(), self.bottom_last()),
            MoveType::Bottom => (self.bottom_last(), self.top_last()),
        }
    }

    /// Applies the Rauzy move of type `eps`. For `t` the last bottom letter is
    /// reinserted just after the position of the last top letter in the bottom
    /// row; `b` is symmetric.
    pub fn rauzy_move(&self, eps: MoveType) -> Result<Move> {
        if !self.is_irreducible() {
            return Err(Error::Reducible(self.to_string()));
        }
        Ok(self.rauzy_move_unchecked(eps))
    }

    /// Same as [`rauzy_move`](Self::rauzy_move) without the irreducibility
    /// check. Moves preserve irreducibility, so callers walking a diagram from
    /// an irreducible base use this in inner loops.
    pub fn rauzy_move_unchecked(&self, eps: MoveType) -> Move {
        let (winner, loser) = self.winner_loser(eps);
        let (mut top, mut bottom) = (self.top.clone(), self.bottom.clone());
        let row = match eps {
            MoveType::Top => &mut bottom,
            MoveType::Bottom => &mut top,
        };
        row.pop();
        let k = row.iter().position(|&a| a == winner).expect("winner present in other row");
        row.insert(k + 1, loser);
        Move {
            target: LabeledPermutation { top, bottom, alphabet: self.alphabet.clone() },
            winner,
            loser,
        }
    }

    /// The reduced permutation `pi_b o pi_t^{-1}`.
    pub fn reduce(&self) -> ReducedPermutation {
        let perm = self
            .top
            .iter()
            .map(|&a| self.bottom_position(a).expect("same alphabet") as u16)
            .collect();
        ReducedPermutation { perm }
    }

    /// Replaces every letter `a` by `r(a)`.
    pub fn renumber(&self, r: &Renumbering) -> LabeledPermutation {
        let top: Vec<Letter> = self.top.iter().map(|&a| r.apply(a)).collect();
        let bottom = self.bottom.iter().map(|&a| r.apply(a)).collect();
        let mut alphabet = top.clone();
        alphabet.sort_unstable();
        LabeledPermutation { top, bottom, alphabet }
    }

    /// The renumbering `r` with `self.renumber(r) == other`, when both tables
    /// have the same reduced permutation.
    pub fn renumbering_to(&self, other: &LabeledPermutation) -> Option<Renumbering> {
        if self.len() != other.len() || self.reduce() != other.reduce() {
            return None;
        }
        Some(Renumbering::from_pairs(self.top.iter().copied().zip(other.top.iter().copied())))
    }

    /// Table with both rows reversed and exchanged; the combinatorics of the
    /// polygon rotated by 180 degrees.
    pub fn rotated(&self) -> LabeledPermutation {
        let top = self.bottom.iter().rev().copied().collect();
        let bottom = self.top.iter().rev().copied().collect();
        LabeledPermutation { top, bottom, alphabet: self.alphabet.clone() }
    }

    /// Canonical serialized key: top letters followed by bottom letters.
    pub fn key(&self) -> Vec<u32> {
        self.top.iter().chain(self.bottom.iter()).map(|a| a.0).collect()
    }
}

impl fmt::Display for LabeledPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_row(f, &self.top)?;
        f.write_str(" / ")?;
        write_row(f, &self.bottom)
    }
}

fn write_row(f: &mut fmt::Formatter<'_>, row: &[Letter]) -> fmt::Result {
    for (i, a) in row.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{a}")?;
    }
    Ok(())
}

fn parse_row(row: &str) -> Result<Vec<Letter>> {
    row.split_whitespace()
        .map(|tok| {
            tok.parse::<u32>()
                .map(Letter)
                .map_err(|_| Error::Parse(format!("bad letter {tok:?}")))
        })
        .collect()
}

fn split_table(s: &str) -> Result<(Vec<Letter>, Vec<Letter>)> {
    let (top, bottom) = s
        .trim()
        .trim_start_matches('(')
        .trim_end_matches(')')
        .split_once('/')
        .ok_or_else(|| Error::Parse("expected two rows separated by '/'".into()))?;
    Ok((parse_row(top)?, parse_row(bottom)?))
}

impl FromStr for LabeledPermutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (top, bottom) = split_table(s)?;
        LabeledPermutation::new(top, bottom)
    }
}

/// A permutation of `{0, .., d-1}`: `perm[i]` is the bottom position of the
/// interval at top position `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ReducedPermutation {
    perm: Vec<u16>,
}

impl ReducedPermutation {
    pub fn new(perm: Vec<u16>) -> Result<Self> {
        let mut check = perm.clone();
        check.sort_unstable();
        if check.len() < 2 || check.iter().enumerate().any(|(i, &p)| p as usize != i) {
            return Err(Error::InvalidPermutation(format!("{perm:?} is not a permutation")));
        }
        Ok(ReducedPermutation { perm })
    }

    pub fn as_slice(&self) -> &[u16] {
        &self.perm
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    /// Labeled form over letters `1..=d` with the identity on top.
    pub fn canonical(&self) -> LabeledPermutation {
        let d = self.perm.len();
        let top: Vec<Letter> = (1..=d as u32).map(Letter).collect();
        let mut bottom = vec![Letter(0); d];
        for (i, &p) in self.perm.iter().enumerate() {
            bottom[p as usize] = Letter(i as u32 + 1);
        }
        LabeledPermutation::new(top, bottom).expect("valid by construction")
    }

    pub fn key(&self) -> Vec<u32> {
        self.perm.iter().map(|&p| p as u32).collect()
    }
}

impl fmt::Display for ReducedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.canonical().fmt(f)
    }
}

/// A relabeling bijection of the alphabet. Letters not mentioned are fixed.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Renumbering {
    map: BTreeMap<Letter, Letter>,
}

impl Renumbering {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Letter, Letter)>) -> Self {
        let map = pairs.into_iter().filter(|(a, b)| a != b).collect();
        Renumbering { map }
    }

    /// The cycle `letters[0] -> letters[1] -> ... -> letters[0]`.
    pub fn cycle(letters: &[Letter]) -> Self {
        let n = letters.len();
        Self::from_pairs((0..n).map(|i| (letters[i], letters[(i + 1) % n])))
    }

    /// The deck generator of the marked family: `sigma = (1, 2, .., n-1)`.
    pub fn sigma(n: u32) -> Self {
        let letters: Vec<Letter> = (1..n).map(Letter).collect();
        Self::cycle(&letters)
    }

    pub fn apply(&self, a: Letter) -> Letter {
        *self.map.get(&a).unwrap_or(&a)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Renumbering) -> Renumbering {
        let keys: Vec<Letter> = self.map.keys().chain(other.map.keys()).copied().collect();
        Self::from_pairs(keys.into_iter().map(|a| (a, other.apply(self.apply(a)))))
    }

    pub fn inverse(&self) -> Renumbering {
        Self::from_pairs(self.map.iter().map(|(&a, &b)| (b, a)))
    }

    /// Integer power; negative exponents use the inverse.
    pub fn pow(&self, k: i64) -> Renumbering {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        (0..k.unsigned_abs()).fold(Renumbering::identity(), |acc, _| acc.then(&base))
    }

    pub fn is_identity(&self) -> bool {
        self.map.is_empty()
    }
}

/// A generalized permutation: two rows in which every letter occurs exactly
/// twice in total. Row lengths may differ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeneralizedPermutation {
    top: Vec<Letter>,
    bottom: Vec<Letter>,
}

impl GeneralizedPermutation {
    pub fn new(top: Vec<Letter>, bottom: Vec<Letter>) -> Result<Self> {
        if top.is_empty() || bottom.is_empty() {
            return Err(Error::InvalidPermutation("empty row".into()));
        }
        let mut counts: BTreeMap<Letter, usize> = BTreeMap::new();
        for &a in top.iter().chain(bottom.iter()) {
            *counts.entry(a).or_default() += 1;
        }
        if let Some((a, c)) = counts.iter().find(|(_, &c)| c != 2) {
            return Err(Error::InvalidPermutation(format!("letter {a} occurs {c} times")));
        }
        Ok(GeneralizedPermutation { top, bottom })
    }

    pub fn top(&self) -> &[Letter] {
        &self.top
    }

    pub fn bottom(&self) -> &[Letter] {
        &self.bottom
    }

    pub fn alphabet(&self) -> Vec<Letter> {
        let mut letters: Vec<Letter> = self.top.iter().chain(self.bottom.iter()).copied().collect();
        letters.sort_unstable();
        letters.dedup();
        letters
    }

    pub fn letter_count(&self) -> usize {
        self.alphabet().len()
    }

    /// One step of the Rauzy move for quadratic differentials. The loser is
    /// removed from the end of its row. If the other occurrence of the winner
    /// sits in the opposite row, the loser is inserted right after it; if it
    /// sits in the winner's own row, the loser is inserted right before it.
    pub fn rauzy_move(&self, eps: MoveType) -> Result<(GeneralizedPermutation, Letter, Letter)> {
        let (mut win_row, mut lose_row) = match eps {
            MoveType::Top => (self.top.clone(), self.bottom.clone()),
            MoveType::Bottom => (self.bottom.clone(), self.top.clone()),
        };
        let winner = *win_row.last().expect("nonempty");
        let loser = lose_row.pop().expect("nonempty");
        if lose_row.is_empty() {
            return Err(Error::InvalidPermutation("move would empty a row".into()));
        }
        let last = win_row.len() - 1;
        if let Some(k) = win_row[..last].iter().position(|&a| a == winner) {
            win_row.insert(k, loser);
        } else {
            let k = lose_row
                .iter()
                .position(|&a| a == winner)
                .ok_or_else(|| Error::InvalidPermutation(format!("winner {winner} occurs once")))?;
            lose_row.insert(k + 1, loser);
        }
        let (top, bottom) = match eps {
            MoveType::Top => (win_row, lose_row),
            MoveType::Bottom => (lose_row, win_row),
        };
        Ok((GeneralizedPermutation::new(top, bottom)?, winner, loser))
    }

    /// Renumbering `r` with `self` relabeled by `r` equal to `other`, if any.
    pub fn renumbering_to(&self, other: &GeneralizedPermutation) -> Option<Renumbering> {
        if self.top.len() != other.top.len() || self.bottom.len() != other.bottom.len() {
            return None;
        }
        let mut map: BTreeMap<Letter, Letter> = BTreeMap::new();
        let pairs = self.top.iter().zip(&other.top).chain(self.bottom.iter().zip(&other.bottom));
        for (&a, &b) in pairs {
            if *map.entry(a).or_insert(b) != b {
                return None;
            }
        }
        let mut images: Vec<Letter> = map.values().copied().collect();
        images.sort_unstable();
        images.dedup();
        (images.len() == map.len()).then(|| Renumbering::from_pairs(map))
    }
}

impl fmt::Display for GeneralizedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_row(f, &self.top)?;
        f.write_str(" / ")?;
        write_row(f, &self.bottom)
    }
}

impl FromStr for GeneralizedPermutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (top, bottom) = split_table(s)?;
        GeneralizedPermutation::new(top, bottom)
    }
}

fn letters(ids: impl IntoIterator<Item = u32>) -> Vec<Letter> {
    ids.into_iter().map(Letter).collect()
}

/// `tau_n = (0 2 3 .. n / n .. 3 2 0)` on the alphabet `{0, 2, 3, .., n}`.
pub fn family_tau(n: u32) -> Result<LabeledPermutation> {
    if n < 2 {
        return Err(Error::Range(format!("tau_n needs n >= 2, got {n}")));
    }
    let top = letters(std::iter::once(0).chain(2..=n));
    let bottom = top.iter().rev().copied().collect();
    LabeledPermutation::new(top, bottom)
}

/// `pi_n = (0 2 3 .. n-1 1 n / n n-1 .. 1 0)` on `{0, 1, .., n}`: the
/// hyperelliptic representative with a regular marked point.
pub fn family_pi(n: u32) -> Result<LabeledPermutation> {
    if n < 2 {
        return Err(Error::Range(format!("pi_n needs n >= 2, got {n}")));
    }
    let top = letters(std::iter::once(0).chain(2..n).chain([1, n]));
    let bottom = letters((0..=n).rev());
    LabeledPermutation::new(top, bottom)
}

/// `(1 2 2 3 3 .. g+1 g+1 / g+2 g+3 g+3 .. 2g+1 2g+1 g+2 1)` on `2g+1` letters.
pub fn family_genperm_odd(g: u32) -> Result<GeneralizedPermutation> {
    if g < 3 {
        return Err(Error::Range(format!("generalized family needs g >= 3, got {g}")));
    }
    let top = letters(std::iter::once(1).chain((2..=g + 1).flat_map(|i| [i, i])));
    let bottom = letters(
        std::iter::once(g + 2)
            .chain((g + 3..=2 * g + 1).flat_map(|i| [i, i]))
            .chain([g + 2, 1]),
    );
    GeneralizedPermutation::new(top, bottom)
}
