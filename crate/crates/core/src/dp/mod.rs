//! `P-Ext` by dynamic programming over a nice tree decomposition.
//!
//! Each node's table holds rows keyed by a bag-local structure (present
//! arguments, present attacks among them, and a labeling) together with
//! witness flags; the value is the probability mass of all compatible
//! partial subframeworks below the node.
//!
//! Witness flags are raised lazily: when an attacker leaves the bag, its
//! `I` (or `U`) label is recorded on every target still in the bag. At the
//! forget of an `O`/`U` argument the justification is either such a flag or
//! an attacker still present in the bag. Introduce never touches witnesses,
//! so every (structure, witness) key stays a function of the partial
//! subframework and tables never merge rows that a later join would need
//! apart.

mod table;

use std::time::Instant;

use indexmap::IndexMap;

use crate::af::{Af, ArgSet};
use crate::error::{Error, Result};
use crate::paf::Paf;
use crate::preprocess::{simplify_for_ext, ExtReduction};
use crate::scalar::Probability;
use crate::semantics::Semantics;
use crate::treedecomp::{decompose, make_nice, Heuristic, NiceTd, NodeKind};

use table::{insert_bit, remap_attacks, remove_bit, BagInfo, Lab, RowKey, Structure, Table, Witness};

/// Attack subsets enumerated at one introduce are capped at `2^MAX_UNCERTAIN_INCIDENT`.
const MAX_UNCERTAIN_INCIDENT: usize = 24;

/// How a DP run is configured.
#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Filter rows violating the query set while generating them rather than
    /// after each introduce. Results are identical either way.
    pub eager_acceptance: bool,
    /// Cooperative time budget, checked between and during table builds.
    pub deadline: Option<Instant>,
    /// Record every table in the [`Solution::trace`].
    pub trace: bool,
    /// Elimination heuristic when no decomposition is supplied.
    pub heuristic: Heuristic,
    pub tie_seed: Option<u64>,
    /// Fail with a capacity error once a table exceeds this many rows.
    pub max_rows: Option<usize>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            eager_acceptance: false,
            deadline: None,
            trace: false,
            heuristic: Heuristic::MinFill,
            tie_seed: None,
            max_rows: None,
        }
    }
}

/// Size of one computed table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableStat {
    pub node: usize,
    pub bag_size: usize,
    /// Attacks between bag arguments.
    pub bag_attacks: usize,
    pub rows: usize,
}

#[derive(Debug, Clone)]
pub struct Solution<P> {
    pub probability: P,
    pub width: usize,
    pub nodes: usize,
    pub tables: Vec<TableStat>,
    /// One line per row, grouped by node in evaluation order, sorted within a node.
    pub trace: Option<Vec<String>>,
}

impl<P> Solution<P> {
    pub fn max_rows(&self) -> usize {
        self.tables.iter().map(|t| t.rows).max().unwrap_or(0)
    }
}

/// `P-Ext` of `s` under `sigma` (admissible, complete or stable).
///
/// Uses `td` when given (it must be a valid nice decomposition of the attack
/// graph), otherwise builds one with `options.heuristic`.
pub fn p_ext<P: Probability>(
    paf: &Paf,
    sigma: Semantics,
    s: &ArgSet,
    td: Option<&NiceTd>,
    options: &SolveOptions,
) -> Result<Solution<P>> {
    if !matches!(sigma, Semantics::Admissible | Semantics::Complete | Semantics::Stable) {
        return Err(Error::Unsupported(format!(
            "the tree-decomposition solver handles adm, com and stb, not {}",
            sigma.short_name()
        )));
    }
    let af = paf.af();
    af.check_set(s)?;
    let built;
    let nice = match td {
        Some(td) => {
            let problems = td.validate(af);
            if !problems.is_empty() {
                return Err(Error::InvalidDecomposition(problems));
            }
            td
        }
        None => {
            let plain = decompose(af, &options.heuristic, options.tie_seed)?;
            built = make_nice(&plain)?;
            &built
        }
    };
    Solver::new(paf, sigma, s, options).run(nice)
}

/// [`p_ext`] with the full trace; returns the probability and the trace lines.
pub fn solve_with_trace<P: Probability>(
    paf: &Paf,
    sigma: Semantics,
    s: &ArgSet,
    td: Option<&NiceTd>,
) -> Result<(P, Vec<String>)> {
    let options = SolveOptions { trace: true, ..SolveOptions::default() };
    let sol = p_ext::<P>(paf, sigma, s, td, &options)?;
    Ok((sol.probability, sol.trace.unwrap_or_default()))
}

/// Outcome of [`p_ext_preprocessed`].
#[derive(Debug, Clone)]
pub struct Preprocessed<P> {
    /// `None` when preprocessing alone showed the probability is zero.
    pub solution: Option<Solution<P>>,
    pub probability: P,
    /// Arguments deleted before solving.
    pub removed: Vec<String>,
}

/// Complete-semantics `P-Ext` after forced-labeling simplification; other
/// semantics are solved unchanged.
pub fn p_ext_preprocessed<P: Probability>(
    paf: &Paf,
    sigma: Semantics,
    s: &ArgSet,
    options: &SolveOptions,
) -> Result<Preprocessed<P>> {
    if sigma != Semantics::Complete {
        let sol = p_ext::<P>(paf, sigma, s, None, options)?;
        return Ok(Preprocessed { probability: sol.probability.clone(), solution: Some(sol), removed: vec![] });
    }
    match simplify_for_ext(paf, s)? {
        ExtReduction::Zero => Ok(Preprocessed { solution: None, probability: P::zero(), removed: vec![] }),
        ExtReduction::Reduced { paf: reduced, multiplier, set, removed } => {
            let sol = p_ext::<P>(&reduced, sigma, &set, None, options)?;
            let probability = P::from_exact(&multiplier) * sol.probability.clone();
            Ok(Preprocessed { solution: Some(sol), probability, removed })
        }
    }
}

/// A bag-local attack incident to the argument being introduced.
struct Incident<P> {
    local: usize,
    /// Position of the other endpoint (the argument's own position for a self-attack).
    other: usize,
    certain: bool,
    p: P,
    q: P,
}

struct Solver<'a, P> {
    af: &'a Af,
    sigma: Semantics,
    in_s: ArgSet,
    certain_arg: Vec<bool>,
    certain_att: Vec<bool>,
    arg_p: Vec<P>,
    arg_q: Vec<P>,
    att_p: Vec<P>,
    att_q: Vec<P>,
    options: &'a SolveOptions,
}

impl<'a, P: Probability> Solver<'a, P> {
    fn new(paf: &'a Paf, sigma: Semantics, s: &ArgSet, options: &'a SolveOptions) -> Self {
        let conv = |v: &[num_rational::BigRational]| -> (Vec<P>, Vec<P>) {
            v.iter()
                .map(|x| (P::from_exact(x), P::from_exact(&x.complement())))
                .unzip()
        };
        let (arg_p, arg_q) = conv(paf.arg_probs());
        let (att_p, att_q) = conv(paf.att_probs());
        let af = paf.af();
        Solver {
            af,
            sigma,
            in_s: s.clone(),
            certain_arg: (0..af.len()).map(|a| paf.arg_certain(a)).collect(),
            certain_att: (0..af.attacks().len()).map(|i| paf.att_certain(i)).collect(),
            arg_p,
            arg_q,
            att_p,
            att_q,
            options,
        }
    }

    fn check_deadline(&self) -> Result<()> {
        match self.options.deadline {
            Some(d) if Instant::now() >= d => Err(Error::Timeout),
            _ => Ok(()),
        }
    }

    fn run(&self, nice: &NiceTd) -> Result<Solution<P>> {
        let n = nice.len();
        let order = nice
            .post_order()
            .ok_or_else(|| Error::Invariant("decomposition is not a rooted tree".into()))?;
        let mut tables: Vec<Option<(BagInfo, Table<P>)>> = (0..n).map(|_| None).collect();
        let mut stats = Vec::with_capacity(n);
        let mut trace = self.options.trace.then(Vec::new);
        for &u in &order {
            self.check_deadline()?;
            let node = &nice.nodes()[u];
            let info = BagInfo::new(self.af, &node.bag)?;
            let mut take = |c: usize| {
                tables[c].take().ok_or_else(|| Error::Invariant(format!("table of node {c} missing")))
            };
            let table = match node.kind {
                NodeKind::Leaf => {
                    let mut t = Table::default();
                    t.insert(RowKey::default(), P::one());
                    t
                }
                NodeKind::Introduce(a) => {
                    let (ci, ct) = take(node.children[0])?;
                    self.introduce(&ci, &ct, &info, a)?
                }
                NodeKind::Forget(a) => {
                    let (ci, ct) = take(node.children[0])?;
                    self.forget(&ci, &ct, &info, a)?
                }
                NodeKind::Join => {
                    let (_, left) = take(node.children[0])?;
                    let (_, right) = take(node.children[1])?;
                    self.join(&left, &right, &info)?
                }
            };
            if let Some(max) = self.options.max_rows {
                if table.len() > max {
                    return Err(Error::Capacity(format!(
                        "table at node {} has {} rows (limit {max})",
                        node.id,
                        table.len()
                    )));
                }
            }
            stats.push(TableStat {
                node: node.id,
                bag_size: info.args.len(),
                bag_attacks: info.atts.len(),
                rows: table.len(),
            });
            if let Some(lines) = trace.as_mut() {
                lines.extend(self.trace_lines(node.id, &info, &table));
            }
            tables[u] = Some((info, table));
        }
        let (_, root) = tables[nice.root()].take().expect("root evaluated last");
        if root.len() > 1 {
            return Err(Error::Invariant(format!("root table has {} rows", root.len())));
        }
        let probability = root.into_values().next().unwrap_or_else(P::zero);
        Ok(Solution { probability, width: nice.width(), nodes: n, tables: stats, trace })
    }

    fn accepts(&self, a: usize, label: Option<Lab>) -> bool {
        if self.in_s.contains(a) {
            label == Some(Lab::In)
        } else {
            label != Some(Lab::In)
        }
    }

    fn introduce(&self, child: &BagInfo, rows: &Table<P>, info: &BagInfo, a: usize) -> Result<Table<P>> {
        let q = info.pos(a).ok_or_else(|| Error::Invariant("introduced argument not in bag".into()))?;
        let att_map = child.attack_map(info);
        let incident: Vec<Incident<P>> = info
            .ends
            .iter()
            .enumerate()
            .filter(|(_, &(x, y))| x == q || y == q)
            .map(|(j, &(x, y))| {
                let g = info.atts[j];
                Incident {
                    local: j,
                    other: if x == q { y } else { x },
                    certain: self.certain_att[g],
                    p: self.att_p[g].clone(),
                    q: self.att_q[g].clone(),
                }
            })
            .collect();
        let eager = self.options.eager_acceptance;
        let mut labels: Vec<Lab> = match self.sigma {
            Semantics::Stable => vec![Lab::In, Lab::Out],
            _ => vec![Lab::In, Lab::Out, Lab::Und],
        };
        if eager {
            labels.retain(|&l| self.accepts(a, Some(l)));
        }
        let absent_ok = !self.certain_arg[a] && (!eager || self.accepts(a, None));

        let mut out = Table::with_capacity(rows.len() * 2);
        let bit = 1u64 << q;
        for (idx, (key, p)) in rows.iter().enumerate() {
            if idx % 1024 == 1023 {
                self.check_deadline()?;
            }
            let base = RowKey {
                s: Structure {
                    present: insert_bit(key.s.present, q),
                    lin: insert_bit(key.s.lin, q),
                    lund: insert_bit(key.s.lund, q),
                    atts: remap_attacks(key.s.atts, &att_map),
                },
                w: Witness { out: insert_bit(key.w.out, q), und: insert_bit(key.w.und, q) },
            };
            if absent_ok {
                add(&mut out, base, p.clone() * self.arg_q[a].clone());
            }
            if labels.is_empty() {
                continue;
            }
            let avail: Vec<&Incident<P>> = incident
                .iter()
                .filter(|inc| inc.other == q || base.s.present >> inc.other & 1 == 1)
                .collect();
            let mandatory: u128 = avail.iter().filter(|i| i.certain).fold(0, |m, i| m | 1u128 << i.local);
            let optional: Vec<&Incident<P>> = avail.iter().copied().filter(|i| !i.certain).collect();
            if optional.len() > MAX_UNCERTAIN_INCIDENT {
                return Err(Error::Capacity(format!(
                    "{} uncertain attacks meet at one argument in a bag",
                    optional.len()
                )));
            }
            let present = base.s.present | bit;
            let with_arg = p.clone() * self.arg_p[a].clone();
            for subset in 0u64..(1u64 << optional.len()) {
                let mut atts = base.s.atts | mandatory;
                let mut prob = with_arg.clone();
                for (t, inc) in optional.iter().enumerate() {
                    if subset >> t & 1 == 1 {
                        atts |= 1u128 << inc.local;
                        prob = prob * inc.p.clone();
                    } else {
                        prob = prob * inc.q.clone();
                    }
                }
                'label: for &l in &labels {
                    for inc in &avail {
                        if atts >> inc.local & 1 == 0 {
                            continue;
                        }
                        let lo = if inc.other == q { l } else { base.s.label(inc.other).expect("present") };
                        if (l == Lab::In && lo != Lab::Out) || (lo == Lab::In && l != Lab::Out) {
                            continue 'label;
                        }
                    }
                    let s = Structure {
                        present,
                        lin: base.s.lin | if l == Lab::In { bit } else { 0 },
                        lund: base.s.lund | if l == Lab::Und { bit } else { 0 },
                        atts,
                    };
                    add(&mut out, RowKey { s, w: base.w }, prob.clone());
                }
            }
        }
        if !eager {
            out.retain(|k, _| self.accepts(a, k.s.label(q)));
        }
        Ok(out)
    }

    fn forget(&self, child: &BagInfo, rows: &Table<P>, info: &BagInfo, a: usize) -> Result<Table<P>> {
        let q = child.pos(a).ok_or_else(|| Error::Invariant("forgotten argument not in child bag".into()))?;
        let att_map = child.attack_map(info);
        // (local attack, other endpoint position); the self-attack appears in both lists
        let attackers: Vec<(usize, usize)> =
            child.ends.iter().enumerate().filter(|(_, e)| e.1 == q).map(|(j, e)| (j, e.0)).collect();
        let targets: Vec<(usize, usize)> = child
            .ends
            .iter()
            .enumerate()
            .filter(|(_, e)| e.0 == q && e.1 != q)
            .map(|(j, e)| (j, e.1))
            .collect();
        let bit = 1u64 << q;
        let mut out = Table::with_capacity(rows.len());
        for (idx, (key, p)) in rows.iter().enumerate() {
            if idx % 1024 == 1023 {
                self.check_deadline()?;
            }
            let mut w = key.w;
            if let Some(l) = key.s.label(q) {
                let attacked_by = |lab: Lab| {
                    attackers.iter().any(|&(j, b)| key.s.has_attack(j) && key.s.label(b) == Some(lab))
                };
                let legal = match (l, self.sigma) {
                    (Lab::In, _) => true,
                    (Lab::Out, _) => w.out & bit != 0 || attacked_by(Lab::In),
                    (Lab::Und, Semantics::Complete) => w.und & bit != 0 || attacked_by(Lab::Und),
                    (Lab::Und, Semantics::Admissible) => true,
                    (Lab::Und, _) => false,
                };
                if !legal {
                    continue;
                }
                if l != Lab::Out {
                    let flags = if l == Lab::In { &mut w.out } else { &mut w.und };
                    for &(j, x) in &targets {
                        if key.s.has_attack(j) {
                            *flags |= 1u64 << x;
                        }
                    }
                }
            }
            let k = RowKey {
                s: Structure {
                    present: remove_bit(key.s.present, q),
                    lin: remove_bit(key.s.lin, q),
                    lund: remove_bit(key.s.lund, q),
                    atts: remap_attacks(key.s.atts, &att_map),
                },
                w: Witness { out: remove_bit(w.out, q), und: remove_bit(w.und, q) },
            };
            add(&mut out, k, p.clone());
        }
        Ok(out)
    }

    fn join(&self, left: &Table<P>, right: &Table<P>, info: &BagInfo) -> Result<Table<P>> {
        let mut by_structure: IndexMap<Structure, Vec<(Witness, &P)>> = IndexMap::new();
        for (k, p) in right {
            by_structure.entry(k.s).or_default().push((k.w, p));
        }
        let mut out = Table::new();
        let mut common_cache: IndexMap<Structure, P> = IndexMap::new();
        for (idx, (k, p1)) in left.iter().enumerate() {
            if idx % 1024 == 1023 {
                self.check_deadline()?;
            }
            let Some(partners) = by_structure.get(&k.s) else { continue };
            let common = common_cache.entry(k.s).or_insert_with(|| self.common(&k.s, info)).clone();
            if common.is_zero() {
                return Err(Error::Invariant("common factor of a join row is zero".into()));
            }
            for (w2, p2) in partners {
                let w = Witness { out: k.w.out | w2.out, und: k.w.und | w2.und };
                add(&mut out, RowKey { s: k.s, w }, p1.clone() * (*p2).clone() / common.clone());
            }
        }
        Ok(out)
    }

    /// Probability of the bag-local part of a structure, counted once in each join branch.
    fn common(&self, s: &Structure, info: &BagInfo) -> P {
        let mut c = P::one();
        for (pos, &x) in info.args.iter().enumerate() {
            c = c * if s.present >> pos & 1 == 1 { self.arg_p[x].clone() } else { self.arg_q[x].clone() };
        }
        for (j, &(x, y)) in info.ends.iter().enumerate() {
            if s.present >> x & 1 == 1 && s.present >> y & 1 == 1 {
                let g = info.atts[j];
                c = c * if s.has_attack(j) { self.att_p[g].clone() } else { self.att_q[g].clone() };
            }
        }
        c
    }

    fn trace_lines(&self, id: usize, info: &BagInfo, table: &Table<P>) -> Vec<String> {
        let name = |pos: usize| self.af.name(info.args[pos]);
        let list = |mask: u64| {
            (0..info.args.len()).filter(|&i| mask >> i & 1 == 1).map(name).collect::<Vec<_>>().join(",")
        };
        let mut lines: Vec<String> = table
            .iter()
            .map(|(k, p)| {
                let atts = (0..info.atts.len())
                    .filter(|&j| k.s.has_attack(j))
                    .map(|j| format!("{}>{}", name(info.ends[j].0), name(info.ends[j].1)))
                    .collect::<Vec<_>>()
                    .join(",");
                let out = k.s.present & !k.s.lin & !k.s.lund;
                format!(
                    "node={id} F=({};{atts}) L=({};{};{}) lw=({};{}) p={p}",
                    list(k.s.present),
                    list(k.s.lin),
                    list(out),
                    list(k.s.lund),
                    list(k.w.out),
                    list(k.w.und),
                )
            })
            .collect();
        lines.sort();
        lines
    }
}

fn add<P: Probability>(table: &mut Table<P>, key: RowKey, p: P) {
    match table.entry(key) {
        indexmap::map::Entry::Occupied(mut e) => {
            let v = e.get_mut();
            *v = v.clone() + p;
        }
        indexmap::map::Entry::Vacant(e) => {
            e.insert(p);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::oracle::Oracle;
    use crate::Exact;
    use num_rational::BigRational;

    fn ratio(n: i64, d: i64) -> Exact {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn example3_complete_extension() {
        let paf = fixtures::example2();
        let s = paf.af().arg_set(["a", "c", "e"]).unwrap();
        let sol = p_ext::<Exact>(&paf, Semantics::Complete, &s, None, &SolveOptions::default()).unwrap();
        assert_eq!(sol.probability, ratio(18, 25));
        let f = p_ext::<f64>(&paf, Semantics::Complete, &s, None, &SolveOptions::default()).unwrap();
        assert!((f.probability - 0.72).abs() < 1e-12);
    }

    #[test]
    fn figure3_tables() {
        let paf = fixtures::example2();
        let td = fixtures::figure3_td(&paf);
        let s = paf.af().arg_set(["a", "c", "e"]).unwrap();
        let (p, trace) = solve_with_trace::<Exact>(&paf, Semantics::Complete, &s, Some(&td)).unwrap();
        assert_eq!(p, ratio(18, 25));
        assert!(trace.contains(&"node=1 F=(a;) L=(a;;) lw=(;) p=4/5".to_string()), "{trace:#?}");
        assert!(trace.contains(&"node=13 F=(c,d;c>d,d>c) L=(c;d;) lw=(d;) p=18/25".to_string()));
        assert!(trace.iter().any(|l| l.starts_with("node=12 F=(a,c,d;") && l.ends_with("p=63/125")));
    }

    #[test]
    fn matches_frozen_oracle_values() {
        let paf = fixtures::example2();
        let af = paf.af();
        let cases: &[(&[&str], Semantics, Exact)] = &[
            (&["a", "c", "e"], Semantics::Admissible, ratio(18, 25)),
            (&["a", "c", "e"], Semantics::Stable, ratio(18, 25)),
            (&[], Semantics::Admissible, ratio(1, 1)),
            (&[], Semantics::Complete, ratio(239, 500)),
            (&[], Semantics::Stable, ratio(0, 1)),
            (&["b", "d"], Semantics::Admissible, ratio(17, 20)),
            (&["b", "d"], Semantics::Complete, ratio(1, 2)),
            (&["b", "d"], Semantics::Stable, ratio(1, 2)),
            (&["b"], Semantics::Admissible, ratio(1, 1)),
            (&["b"], Semantics::Complete, ratio(3, 20)),
            (&["b"], Semantics::Stable, ratio(0, 1)),
        ];
        for (names, sigma, expected) in cases {
            let s = af.arg_set(names.iter().copied()).unwrap();
            for eager in [false, true] {
                let opts = SolveOptions { eager_acceptance: eager, ..SolveOptions::default() };
                let got = p_ext::<Exact>(&paf, *sigma, &s, None, &opts).unwrap().probability;
                assert_eq!(&got, expected, "{names:?} {sigma}");
            }
        }
    }

    #[test]
    fn grounded_is_unsupported() {
        let paf = fixtures::example2();
        let s = paf.af().empty_set();
        let err = p_ext::<Exact>(&paf, Semantics::Grounded, &s, None, &SolveOptions::default());
        assert!(matches!(err, Err(Error::Unsupported(_))));
    }

    #[test]
    fn empty_framework() {
        let paf = Paf::from_decimals([], []).unwrap();
        let s = paf.af().empty_set();
        let (p, trace) = solve_with_trace::<Exact>(&paf, Semantics::Admissible, &s, None).unwrap();
        assert_eq!(p, ratio(1, 1));
        assert_eq!(trace.len(), 1);
    }

    #[test]
    fn invalid_supplied_decomposition_is_rejected() {
        let paf = fixtures::example2();
        let other = Paf::from_decimals([("a", "1")], []).unwrap();
        let td = make_nice(&decompose(other.af(), &Heuristic::MinFill, None).unwrap()).unwrap();
        let s = paf.af().empty_set();
        let err = p_ext::<Exact>(&paf, Semantics::Complete, &s, Some(&td), &SolveOptions::default());
        assert!(matches!(err, Err(Error::InvalidDecomposition(_))));
    }

    #[test]
    fn expired_deadline_times_out() {
        let paf = fixtures::example2();
        let s = paf.af().empty_set();
        let opts = SolveOptions { deadline: Some(Instant::now()), ..SolveOptions::default() };
        assert!(matches!(p_ext::<f64>(&paf, Semantics::Complete, &s, None, &opts), Err(Error::Timeout)));
    }

    #[test]
    fn preprocessed_matches_oracle_on_figure2() {
        let paf = fixtures::figure2();
        let oracle = Oracle::new(&paf);
        for names in [&["b"][..], &["a", "d"], &["a", "b", "d"], &["c"], &[]] {
            let s = paf.af().arg_set(names.iter().copied()).unwrap();
            let pre = p_ext_preprocessed::<Exact>(&paf, Semantics::Complete, &s, &SolveOptions::default()).unwrap();
            let expected: Exact = oracle.p_ext(Semantics::Complete, &s).unwrap();
            assert_eq!(pre.probability, expected, "{names:?}");
        }
    }
}
