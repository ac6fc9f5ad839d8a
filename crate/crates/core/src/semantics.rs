//! Extension and labeling semantics, evaluated by direct predicate checks and
//! subset enumeration.

use std::fmt;
use std::str::FromStr;

use crate::af::{ArgSet, AttackGraph};
use crate::error::{Error, Result};

/// Largest number of present arguments `extensions` will enumerate subsets of.
pub const MAX_ENUMERATED_ARGS: usize = 25;

/// Largest number of present arguments `labelings` will enumerate 3^n labelings of.
pub const MAX_LABELED_ARGS: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Semantics {
    ConflictFree,
    Admissible,
    Complete,
    Stable,
    Grounded,
}

impl Semantics {
    pub const ALL: [Semantics; 5] = [
        Semantics::ConflictFree,
        Semantics::Admissible,
        Semantics::Complete,
        Semantics::Stable,
        Semantics::Grounded,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            Semantics::ConflictFree => "cf",
            Semantics::Admissible => "adm",
            Semantics::Complete => "com",
            Semantics::Stable => "stb",
            Semantics::Grounded => "grd",
        }
    }

    pub fn long_name(self) -> &'static str {
        match self {
            Semantics::ConflictFree => "conflict-free",
            Semantics::Admissible => "admissible",
            Semantics::Complete => "complete",
            Semantics::Stable => "stable",
            Semantics::Grounded => "grounded",
        }
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.long_name())
    }
}

impl FromStr for Semantics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Semantics::ALL
            .into_iter()
            .find(|sem| sem.short_name() == s || sem.long_name() == s)
            .ok_or_else(|| Error::Parse { line: 0, column: 0, message: format!("unknown semantics `{s}`") })
    }
}

fn check_present<G: AttackGraph>(g: &G, s: &ArgSet) -> Result<()> {
    let af = g.af();
    for a in s.ones() {
        if a >= af.len() {
            return Err(Error::UnknownArgument(format!("#{a}")));
        }
        if !g.has_arg(a) {
            return Err(Error::UnknownArgument(af.name(a).to_string()));
        }
    }
    Ok(())
}

fn check_arg<G: AttackGraph>(g: &G, a: usize) -> Result<()> {
    let af = g.af();
    if a >= af.len() {
        return Err(Error::UnknownArgument(format!("#{a}")));
    }
    if !g.has_arg(a) {
        return Err(Error::UnknownArgument(af.name(a).to_string()));
    }
    Ok(())
}

pub fn is_conflict_free<G: AttackGraph>(g: &G, s: &ArgSet) -> Result<bool> {
    check_present(g, s)?;
    Ok(conflict_free(g, s))
}

pub fn defends<G: AttackGraph>(g: &G, s: &ArgSet, a: usize) -> Result<bool> {
    check_present(g, s)?;
    check_arg(g, a)?;
    Ok(defends_unchecked(g, s, a))
}

fn conflict_free<G: AttackGraph>(g: &G, s: &ArgSet) -> bool {
    s.ones().all(|a| g.targets(a).all(|b| !s.contains(b)))
}

fn defends_unchecked<G: AttackGraph>(g: &G, s: &ArgSet, a: usize) -> bool {
    g.attackers(a).all(|b| g.attackers(b).any(|c| s.contains(c)))
}

fn attacks_arg<G: AttackGraph>(g: &G, s: &ArgSet, a: usize) -> bool {
    g.attackers(a).any(|b| s.contains(b))
}

/// The grounded extension: least fixed point of the characteristic function.
pub fn grounded<G: AttackGraph>(g: &G) -> ArgSet {
    let present = g.present_args();
    let mut current = g.af().empty_set();
    loop {
        let mut next = g.af().empty_set();
        for a in present.ones() {
            if defends_unchecked(g, &current, a) {
                next.insert(a);
            }
        }
        if next == current {
            return current;
        }
        current = next;
    }
}

/// Whether `s` is a `sigma`-extension of `g`. Members of `s` must be present in `g`.
pub fn is_extension<G: AttackGraph>(g: &G, sigma: Semantics, s: &ArgSet) -> Result<bool> {
    check_present(g, s)?;
    Ok(is_extension_unchecked(g, sigma, s))
}

pub(crate) fn is_extension_unchecked<G: AttackGraph>(g: &G, sigma: Semantics, s: &ArgSet) -> bool {
    if sigma == Semantics::Grounded {
        return grounded(g) == *s;
    }
    if !conflict_free(g, s) {
        return false;
    }
    match sigma {
        Semantics::ConflictFree => true,
        Semantics::Admissible => s.ones().all(|a| defends_unchecked(g, s, a)),
        Semantics::Complete => {
            let present = g.present_args();
            s.ones().all(|a| defends_unchecked(g, s, a))
                && present.ones().all(|a| s.contains(a) || !defends_unchecked(g, s, a))
        }
        Semantics::Stable => {
            let present = g.present_args();
            present.ones().all(|a| s.contains(a) || attacks_arg(g, s, a))
        }
        Semantics::Grounded => unreachable!(),
    }
}

/// All `sigma`-extensions, by enumeration over subsets of the present arguments.
///
/// The result is sorted. Grounded yields exactly one set.
pub fn extensions<G: AttackGraph>(g: &G, sigma: Semantics) -> Result<Vec<ArgSet>> {
    if sigma == Semantics::Grounded {
        return Ok(vec![grounded(g)]);
    }
    let mut out: Vec<ArgSet> = subsets(g)?
        .filter(|s| is_extension_unchecked(g, sigma, s))
        .collect();
    out.sort();
    Ok(out)
}

/// Whether some `sigma`-extension contains `a` (credulous acceptance).
pub fn credulously_accepted<G: AttackGraph>(g: &G, sigma: Semantics, a: usize) -> Result<bool> {
    check_arg(g, a)?;
    if sigma == Semantics::Grounded {
        return Ok(grounded(g).contains(a));
    }
    Ok(subsets(g)?.any(|s| s.contains(a) && is_extension_unchecked(g, sigma, &s)))
}

fn subsets<G: AttackGraph>(g: &G) -> Result<impl Iterator<Item = ArgSet> + '_> {
    let present: Vec<usize> = g.present_args().ones().collect();
    if present.len() > MAX_ENUMERATED_ARGS {
        return Err(Error::Capacity(format!(
            "{} arguments exceed the enumeration limit of {MAX_ENUMERATED_ARGS}",
            present.len()
        )));
    }
    let n = g.af().len();
    Ok((0u64..1 << present.len()).map(move |mask| {
        let mut s = crate::af::ArgSet::with_capacity(n);
        for (bit, &a) in present.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                s.insert(a);
            }
        }
        s
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    In,
    Out,
    Undec,
}

impl Label {
    pub const ALL: [Label; 3] = [Label::In, Label::Out, Label::Undec];
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::In => "I",
            Label::Out => "O",
            Label::Undec => "U",
        })
    }
}

/// A (possibly partial) labeling, indexed by argument.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Labeling {
    labels: Vec<Option<Label>>,
}

impl Labeling {
    pub fn empty(num_args: usize) -> Self {
        Labeling { labels: vec![None; num_args] }
    }

    pub fn get(&self, a: usize) -> Option<Label> {
        self.labels.get(a).copied().flatten()
    }

    pub fn set(&mut self, a: usize, label: Label) {
        self.labels[a] = Some(label);
    }

    pub fn num_args(&self) -> usize {
        self.labels.len()
    }

    pub fn with_label(&self, label: Label) -> ArgSet {
        let mut s = ArgSet::with_capacity(self.labels.len());
        for (i, l) in self.labels.iter().enumerate() {
            if *l == Some(label) {
                s.insert(i);
            }
        }
        s
    }

    /// The (I, O, U) triple view.
    pub fn triple(&self) -> (ArgSet, ArgSet, ArgSet) {
        (self.with_label(Label::In), self.with_label(Label::Out), self.with_label(Label::Undec))
    }

    pub fn domain(&self) -> ArgSet {
        let mut s = ArgSet::with_capacity(self.labels.len());
        for (i, l) in self.labels.iter().enumerate() {
            if l.is_some() {
                s.insert(i);
            }
        }
        s
    }
}

/// `L_S`: I on `s`, O on arguments attacked by `s`, U elsewhere (total on present arguments).
pub fn labeling_of_set<G: AttackGraph>(g: &G, s: &ArgSet) -> Result<Labeling> {
    if !is_conflict_free(g, s)? {
        return Err(Error::NotConflictFree);
    }
    let af = g.af();
    let mut l = Labeling::empty(af.len());
    for a in g.present_args().ones() {
        let label = if s.contains(a) {
            Label::In
        } else if attacks_arg(g, s, a) {
            Label::Out
        } else {
            Label::Undec
        };
        l.set(a, label);
    }
    Ok(l)
}

/// `S_L`: the arguments labelled I.
pub fn set_of_labeling(l: &Labeling) -> ArgSet {
    l.with_label(Label::In)
}

/// Whether a total labeling of the present arguments satisfies the labeling
/// conditions of `sigma` (adm, com or stb).
pub fn is_labeling<G: AttackGraph>(g: &G, sigma: Semantics, l: &Labeling) -> Result<bool> {
    let labeled = matches!(sigma, Semantics::Admissible | Semantics::Complete | Semantics::Stable);
    if !labeled {
        return Err(Error::Unsupported(format!("no labeling semantics for {sigma}")));
    }
    let present = g.present_args();
    if l.num_args() != g.af().len() || l.domain() != present {
        return Ok(false);
    }
    Ok(present.ones().all(|a| labeled_ok(g, sigma, l, a)))
}

fn labeled_ok<G: AttackGraph>(g: &G, sigma: Semantics, l: &Labeling, a: usize) -> bool {
    let has = |label| g.attackers(a).any(|b| l.get(b) == Some(label));
    match l.get(a) {
        Some(Label::In) => g.attackers(a).all(|b| l.get(b) == Some(Label::Out)),
        Some(Label::Out) => has(Label::In),
        Some(Label::Undec) => match sigma {
            Semantics::Stable => false,
            Semantics::Complete => has(Label::Undec) && !has(Label::In),
            _ => true,
        },
        None => false,
    }
}

/// All total `sigma`-labelings (adm, com, stb) by enumeration over 3^n assignments.
pub fn labelings<G: AttackGraph>(g: &G, sigma: Semantics) -> Result<Vec<Labeling>> {
    let present: Vec<usize> = g.present_args().ones().collect();
    if present.len() > MAX_LABELED_ARGS {
        return Err(Error::Capacity(format!(
            "{} arguments exceed the labeling enumeration limit of {MAX_LABELED_ARGS}",
            present.len()
        )));
    }
    let n = g.af().len();
    let total = 3usize.pow(present.len() as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut l = Labeling::empty(n);
        let mut c = code;
        for &a in &present {
            l.set(a, Label::ALL[c % 3]);
            c /= 3;
        }
        if is_labeling(g, sigma, &l)? {
            out.push(l);
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::af::Af;

    fn example1() -> Af {
        Af::new(
            ["a", "b", "c", "d", "e"],
            [
                ("a", "b"),
                ("a", "d"),
                ("b", "a"),
                ("b", "c"),
                ("c", "b"),
                ("c", "d"),
                ("d", "c"),
                ("d", "a"),
                ("d", "e"),
                ("e", "d"),
            ],
        )
        .unwrap()
    }

    fn set(af: &Af, names: &[&str]) -> ArgSet {
        af.arg_set(names.iter().copied()).unwrap()
    }

    #[test]
    fn conflict_freeness() {
        let af = example1();
        assert!(is_conflict_free(&af, &set(&af, &["a", "c", "e"])).unwrap());
        assert!(is_conflict_free(&af, &af.empty_set()).unwrap());
        assert!(!is_conflict_free(&af, &set(&af, &["a", "b"])).unwrap());
        let mut bad = af.empty_set();
        bad.grow(9);
        bad.insert(8);
        assert!(matches!(is_conflict_free(&af, &bad), Err(Error::UnknownArgument(_))));
    }

    #[test]
    fn defense() {
        let af = example1();
        let a = af.arg("a").unwrap();
        assert!(defends(&af, &set(&af, &["a", "c", "e"]), a).unwrap());
        assert!(!defends(&af, &af.empty_set(), a).unwrap());
        let lone = Af::new(["x"], []).unwrap();
        assert!(defends(&lone, &lone.empty_set(), 0).unwrap());
    }

    #[test]
    fn example1_complete_extensions() {
        let af = example1();
        let got = extensions(&af, Semantics::Complete).unwrap();
        let mut want: Vec<ArgSet> = [
            &[][..],
            &["e"],
            &["b"],
            &["b", "e"],
            &["b", "d"],
            &["a", "c", "e"],
        ]
        .iter()
        .map(|s| set(&af, s))
        .collect();
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn example1_stable_extensions() {
        // Frozen from subset enumeration over all 32 subsets.
        let af = example1();
        let got = extensions(&af, Semantics::Stable).unwrap();
        let mut want = vec![
            set(&af, &["a", "c", "e"]),
            set(&af, &["b", "d"]),
            set(&af, &["b", "e"]),
        ];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn grounded_is_minimal_complete() {
        let af = example1();
        assert_eq!(extensions(&af, Semantics::Grounded).unwrap(), vec![af.empty_set()]);
        let free = Af::new(["x", "y"], []).unwrap();
        assert_eq!(extensions(&free, Semantics::Stable).unwrap(), vec![free.full_set()]);
        assert_eq!(grounded(&free), free.full_set());
    }

    #[test]
    fn set_labeling_correspondence() {
        let af = example1();
        let l = labeling_of_set(&af, &set(&af, &["a", "c", "e"])).unwrap();
        assert_eq!(l.triple(), (set(&af, &["a", "c", "e"]), set(&af, &["b", "d"]), af.empty_set()));
        let l = labeling_of_set(&af, &set(&af, &["b"])).unwrap();
        assert_eq!(l.triple(), (set(&af, &["b"]), set(&af, &["a", "c"]), set(&af, &["d", "e"])));
        assert_eq!(set_of_labeling(&l), set(&af, &["b"]));
        assert!(matches!(labeling_of_set(&af, &set(&af, &["a", "b"])), Err(Error::NotConflictFree)));

        let lone = Af::new(["x"], []).unwrap();
        let l = labeling_of_set(&lone, &lone.empty_set()).unwrap();
        assert_eq!(l.triple(), (lone.empty_set(), lone.empty_set(), lone.full_set()));
        assert!(set_of_labeling(&l).is_clear());
    }

    #[test]
    fn labelings_match_extensions() {
        let af = example1();
        for sigma in [Semantics::Complete, Semantics::Stable] {
            let labs = labelings(&af, sigma).unwrap();
            let mut sets: Vec<ArgSet> = labs.iter().map(set_of_labeling).collect();
            sets.sort();
            assert_eq!(sets, extensions(&af, sigma).unwrap());
            for l in &labs {
                assert_eq!(*l, labeling_of_set(&af, &set_of_labeling(l)).unwrap());
            }
        }
        let lone = Af::new(["x"], []).unwrap();
        let labs = labelings(&lone, Semantics::Stable).unwrap();
        assert_eq!(labs.len(), 1);
        assert_eq!(labs[0].get(0), Some(Label::In));
    }

    #[test]
    fn self_attack_is_never_in() {
        let af = Af::new(["s"], [("s", "s")]).unwrap();
        assert_eq!(extensions(&af, Semantics::Complete).unwrap(), vec![af.empty_set()]);
        assert!(extensions(&af, Semantics::Stable).unwrap().is_empty());
        let labs = labelings(&af, Semantics::Complete).unwrap();
        assert_eq!(labs.len(), 1);
        assert_eq!(labs[0].get(0), Some(Label::Undec));
    }

    #[test]
    fn parses_semantics_names() {
        assert_eq!("complete".parse::<Semantics>().unwrap(), Semantics::Complete);
        assert_eq!("stb".parse::<Semantics>().unwrap(), Semantics::Stable);
        assert!("preferred".parse::<Semantics>().is_err());
    }
}
