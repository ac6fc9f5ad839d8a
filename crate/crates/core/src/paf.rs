//! Probabilistic argumentation frameworks under the independence model.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::af::{Af, ArgSet, Subframework};
use crate::error::{Error, Result};
use crate::scalar::{format_exact, parse_exact, Probability};

/// A PAF: an AF with an exact marginal probability in `(0, 1]` on every
/// argument and attack.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Paf {
    af: Af,
    arg_prob: Vec<BigRational>,
    att_prob: Vec<BigRational>,
}

fn check_range(element: impl FnOnce() -> String, p: &BigRational) -> Result<()> {
    if p.is_zero() || *p < BigRational::zero() || *p > BigRational::one() {
        return Err(Error::ProbabilityRange { element: element(), value: format_exact(p) });
    }
    Ok(())
}

impl Paf {
    /// Builds a PAF from `(name, probability)` and `(source, target, probability)` triples.
    pub fn new<'a, A, R>(arguments: A, attacks: R) -> Result<Self>
    where
        A: IntoIterator<Item = (&'a str, BigRational)>,
        R: IntoIterator<Item = (&'a str, &'a str, BigRational)>,
    {
        let arguments: Vec<_> = arguments.into_iter().collect();
        let attacks: Vec<_> = attacks.into_iter().collect();
        let af = Af::new(
            arguments.iter().map(|(n, _)| *n),
            attacks.iter().map(|(s, t, _)| (*s, *t)),
        )?;
        let mut arg_prob = vec![BigRational::one(); af.len()];
        for (name, p) in arguments {
            check_range(|| format!("argument `{name}`"), &p)?;
            arg_prob[af.arg(name)?] = p;
        }
        let mut att_prob = vec![BigRational::one(); af.attacks().len()];
        for (s, t, p) in attacks {
            check_range(|| format!("attack ({s}, {t})"), &p)?;
            let idx = af.attack_id(af.arg(s)?, af.arg(t)?).expect("attack registered");
            att_prob[idx] = p;
        }
        Ok(Paf { af, arg_prob, att_prob })
    }

    /// Convenience constructor from decimal literals, e.g. `("a", "0.8")`.
    pub fn from_decimals<'a, A, R>(arguments: A, attacks: R) -> Result<Self>
    where
        A: IntoIterator<Item = (&'a str, &'a str)>,
        R: IntoIterator<Item = (&'a str, &'a str, &'a str)>,
    {
        let lit = |s: &str| {
            parse_exact(s).ok_or_else(|| Error::Parse {
                line: 0,
                column: 0,
                message: format!("bad probability literal `{s}`"),
            })
        };
        let args = arguments
            .into_iter()
            .map(|(n, p)| Ok((n, lit(p)?)))
            .collect::<Result<Vec<_>>>()?;
        let atts = attacks
            .into_iter()
            .map(|(s, t, p)| Ok((s, t, lit(p)?)))
            .collect::<Result<Vec<_>>>()?;
        Paf::new(args, atts)
    }

    /// A PAF with all arguments and attacks certain.
    pub fn certain(af: Af) -> Self {
        let arg_prob = vec![BigRational::one(); af.len()];
        let att_prob = vec![BigRational::one(); af.attacks().len()];
        Paf { af, arg_prob, att_prob }
    }

    /// Replaces marginals. Probabilities are checked to lie in `(0, 1]`.
    pub fn with_probabilities(af: Af, arg_prob: Vec<BigRational>, att_prob: Vec<BigRational>) -> Result<Self> {
        assert_eq!(arg_prob.len(), af.len());
        assert_eq!(att_prob.len(), af.attacks().len());
        for (i, p) in arg_prob.iter().enumerate() {
            check_range(|| format!("argument `{}`", af.name(i)), p)?;
        }
        for (i, p) in att_prob.iter().enumerate() {
            let a = af.attack(i);
            check_range(|| format!("attack ({}, {})", af.name(a.source), af.name(a.target)), p)?;
        }
        Ok(Paf { af, arg_prob, att_prob })
    }

    pub fn af(&self) -> &Af {
        &self.af
    }

    pub fn arg_prob(&self, arg: usize) -> &BigRational {
        &self.arg_prob[arg]
    }

    pub fn att_prob(&self, attack: usize) -> &BigRational {
        &self.att_prob[attack]
    }

    pub fn arg_probs(&self) -> &[BigRational] {
        &self.arg_prob
    }

    pub fn att_probs(&self) -> &[BigRational] {
        &self.att_prob
    }

    pub fn arg_certain(&self, arg: usize) -> bool {
        self.arg_prob[arg].is_one()
    }

    pub fn att_certain(&self, attack: usize) -> bool {
        self.att_prob[attack].is_one()
    }

    /// Number of arguments and attacks with probability below one.
    pub fn uncertain_elements(&self) -> usize {
        self.arg_prob.iter().chain(&self.att_prob).filter(|p| !p.is_one()).count()
    }

    /// Deletes `removed` arguments with their incident attacks. Returns the old→new index map.
    pub fn without(&self, removed: &ArgSet) -> (Paf, Vec<Option<usize>>) {
        let (af, map) = self.af.without(removed);
        let arg_prob = (0..self.af.len())
            .filter(|&i| map[i].is_some())
            .map(|i| self.arg_prob[i].clone())
            .collect();
        let att_prob = self
            .af
            .attacks()
            .iter()
            .zip(&self.att_prob)
            .filter(|(a, _)| map[a.source].is_some() && map[a.target].is_some())
            .map(|(_, p)| p.clone())
            .collect();
        (Paf { af, arg_prob, att_prob }, map)
    }

    /// Checks membership of `f` in `F_P`: well-formed, certain arguments present,
    /// certain attacks present whenever both endpoints are.
    pub fn check_subframework(&self, f: &Subframework) -> Result<()> {
        f.check(&self.af)?;
        for a in 0..self.af.len() {
            if self.arg_certain(a) && !f.args.contains(a) {
                return Err(Error::NotCertainRespecting(format!(
                    "certain argument `{}` is absent",
                    self.af.name(a)
                )));
            }
        }
        for (i, att) in self.af.attacks().iter().enumerate() {
            if self.att_certain(i)
                && f.args.contains(att.source)
                && f.args.contains(att.target)
                && !f.atts.contains(i)
            {
                return Err(Error::NotCertainRespecting(format!(
                    "certain attack ({}, {}) is absent",
                    self.af.name(att.source),
                    self.af.name(att.target)
                )));
            }
        }
        Ok(())
    }

    /// Probability of a subframework: product of `P(a)` over present and `1-P(a)`
    /// over absent arguments, `P(r)` over present attacks and `1-P(r)` over
    /// attacks whose endpoints are both present but which are absent.
    pub fn subframework_probability<P: Probability>(&self, f: &Subframework) -> Result<P> {
        self.check_subframework(f)?;
        Ok(self.subframework_probability_unchecked(f))
    }

    pub(crate) fn subframework_probability_unchecked<P: Probability>(&self, f: &Subframework) -> P {
        let mut p = P::one();
        for (a, q) in self.arg_prob.iter().enumerate() {
            let q = P::from_exact(q);
            p = if f.args.contains(a) { p * q } else { p * q.complement() };
        }
        for (i, att) in self.af.attacks().iter().enumerate() {
            if f.args.contains(att.source) && f.args.contains(att.target) {
                let q = P::from_exact(&self.att_prob[i]);
                p = if f.atts.contains(i) { p * q } else { p * q.complement() };
            }
        }
        p
    }
}
