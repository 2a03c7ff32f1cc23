//! Exact checkers for the sum rule `Σ_{n=0..p} n·D(n) = ⌊(p+1)!/e⌋` and
//! every identity used along the way. Each checker decides its identity
//! case by case over an integer range and records failures instead of
//! stopping at the first one.

use crate::derangement::{
    a_closed_form, a_floor_formula, a_recurrence, d_floor_formula, d_nearest_formula,
    d_pair_recurrence, d_signed_recurrence, d_sum, derangements, sum_rule_lhs, sum_rule_rhs,
};
use crate::elaurent::{el_floor, el_nearest, el_sign, ELaurent};
use crate::error::{Error, Result};
use crate::exact::{binomial, factorial, floor_rational, sign_power, Integer, Rational};
use crate::perm::{brute_derangement_count, brute_sum_rule, DEFAULT_ENUMERATION_CAP, SUM_RULE_CAP};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::cmp::Ordering;
use std::fmt;
use std::ops::RangeInclusive;

/// One failing case: the input and both sides rendered exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub input: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub identity_id: String,
    pub range: RangeInclusive<u32>,
    pub cases_checked: u64,
    pub failures: Vec<Failure>,
}

impl VerificationReport {
    fn new(identity_id: &str, range: RangeInclusive<u32>) -> Self {
        VerificationReport {
            identity_id: identity_id.to_string(),
            range,
            cases_checked: 0,
            failures: Vec::new(),
        }
    }

    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }

    /// Inputs of the failing cases, in order.
    pub fn failing_inputs(&self) -> Vec<&str> {
        self.failures.iter().map(|f| f.input.as_str()).collect()
    }

    fn check(
        &mut self,
        input: impl Fn() -> String,
        lhs: impl fmt::Display,
        rhs: impl fmt::Display,
        ok: bool,
    ) {
        if !ok {
            self.failures.push(Failure {
                input: input(),
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            });
        }
    }

    fn check_eq<T: PartialEq + fmt::Display>(
        &mut self,
        input: impl Fn() -> String,
        lhs: &T,
        rhs: &T,
    ) {
        self.check(input, lhs, rhs, lhs == rhs);
    }

    /// Joins a report over an adjacent range of the same identity.
    pub fn merge(mut self, other: VerificationReport) -> VerificationReport {
        debug_assert_eq!(self.identity_id, other.identity_id);
        let start = *self.range.start().min(other.range.start());
        let end = *self.range.end().max(other.range.end());
        self.range = start..=end;
        self.cases_checked += other.cases_checked;
        self.failures.extend(other.failures);
        self
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<18} {}..={}  cases={}  {}",
            self.identity_id,
            self.range.start(),
            self.range.end(),
            self.cases_checked,
            if self.pass() { "PASS" } else { "FAIL" }
        )?;
        for fail in &self.failures {
            writeln!(
                f,
                "    {}: lhs = {}, rhs = {}",
                fail.input, fail.lhs, fail.rhs
            )?;
        }
        Ok(())
    }
}

fn require_range(range: &RangeInclusive<u32>, min: u32, max: u32, what: &str) -> Result<()> {
    if range.is_empty() || *range.start() < min || *range.end() > max {
        return Err(Error::Precondition(format!(
            "{what}: range {}..={} must be non-empty and within {min}..={max}",
            range.start(),
            range.end()
        )));
    }
    Ok(())
}

/// `∫_{-1}^{∞} e^{-t} tⁿ dt` for `n = 0..=max`, via `I_0 = e`,
/// `I_n = n·I_{n-1} + (-1)ⁿ·e` from integration by parts.
pub fn symbolic_i_upto(max: u32) -> Vec<ELaurent> {
    let mut out = Vec::with_capacity(max as usize + 1);
    let mut cur = ELaurent::e();
    out.push(cur.clone());
    for n in 1..=max {
        cur =
            &(&cur * &Integer::from(n)) + &ELaurent::e_times(Rational::from_integer(sign_power(n)));
        out.push(cur.clone());
    }
    out
}

pub fn symbolic_i(n: u32) -> ELaurent {
    symbolic_i_upto(n).pop().expect("non-empty")
}

/// `e·⌊(n!+1)/e⌋ = ∫_{-1}^{∞} e^{-t} tⁿ dt`.
pub fn verify_has1(range: RangeInclusive<u32>) -> Result<VerificationReport> {
    require_range(&range, 0, 500, "has1")?;
    let integrals = symbolic_i_upto(*range.end());
    let mut report = VerificationReport::new("has1", range.clone());
    for n in range {
        let floor = el_floor(&ELaurent::int_over_e(factorial(n) + 1))?;
        let rhs = ELaurent::e_times(Rational::from_integer(floor));
        report.check_eq(|| format!("n={n}"), &integrals[n as usize], &rhs);
        report.cases_checked += 1;
    }
    Ok(report)
}

/// `∫_{-1}^{0} e^{-t} tⁿ dt = e·((1+(-1)ⁿ)/2 - {n!/e})`, with the left side
/// taken as `I_n - n!` (the integral over `[0, ∞)` is `n!`).
pub fn verify_has2(range: RangeInclusive<u32>) -> Result<VerificationReport> {
    require_range(&range, 1, 500, "has2")?;
    let integrals = symbolic_i_upto(*range.end());
    let mut report = VerificationReport::new("has2", range.clone());
    for n in range {
        let n_fact = factorial(n);
        let lhs = &integrals[n as usize] - &ELaurent::from_integer(n_fact.clone());
        let x = ELaurent::int_over_e(n_fact);
        let fractional = &x - &ELaurent::from_integer(el_floor(&x)?);
        let parity = ELaurent::from_integer(Integer::from(1 - n % 2));
        let rhs = (&parity - &fractional)
            .times_e()
            .expect("fractional part of n!/e has no e term");
        report.check_eq(|| format!("n={n}"), &lhs, &rhs);
        report.cases_checked += 1;
    }
    Ok(report)
}

/// `∫_{-1}^{∞} e^{-t} t^{p+1} (t - (p+2)) dt = (-1)^p·e`.
pub fn verify_iint(range: RangeInclusive<u32>) -> Result<VerificationReport> {
    require_range(&range, 0, 500, "iint")?;
    let integrals = symbolic_i_upto(*range.end() + 2);
    let mut report = VerificationReport::new("iint", range.clone());
    for p in range {
        let i = p as usize;
        let lhs = &integrals[i + 2] - &(&integrals[i + 1] * &Integer::from(p + 2));
        let rhs = ELaurent::e_times(Rational::from_integer(sign_power(p)));
        report.check_eq(|| format!("p={p}"), &lhs, &rhs);
        report.cases_checked += 1;
    }
    Ok(report)
}

/// `⌊(p+2)!/e⌋ = ⌊(p+1)!/e⌋ + (p+1)·⌊((p+1)!+1)/e⌋`.
pub fn verify_toprove(range: RangeInclusive<u32>) -> Result<VerificationReport> {
    require_range(&range, 0, 300, "toprove")?;
    let mut report = VerificationReport::new("toprove", range.clone());
    for p in range {
        let f1 = factorial(p + 1);
        let lhs = el_floor(&ELaurent::int_over_e(&f1 * (p + 2)))?;
        let rhs = el_floor(&ELaurent::int_over_e(f1.clone()))?
            + el_floor(&ELaurent::int_over_e(f1 + 1))? * (p + 1);
        report.check_eq(|| format!("p={p}"), &lhs, &rhs);
        report.cases_checked += 1;
    }
    Ok(report)
}

fn hermite_holds(x: &Rational, m: u32) -> (Integer, Integer) {
    let m_q = Rational::from_integer(Integer::from(m));
    let lhs = (0..m).fold(Integer::zero(), |acc, k| {
        acc + floor_rational(&(x + Rational::new(Integer::from(k), Integer::from(m))))
    });
    (lhs, floor_rational(&(x * m_q)))
}

/// `Σ_{k=0..m-1} ⌊x + k/m⌋ = ⌊m·x⌋` for one rational `x`.
pub fn verify_hermite_rational(x: &Rational, m: u32) -> Result<VerificationReport> {
    verify_hermite_cases(&[(x.clone(), m)])
}

/// Rational Hermite identity over explicit cases; the report range is the
/// case index range.
pub fn verify_hermite_cases(cases: &[(Rational, u32)]) -> Result<VerificationReport> {
    if cases.is_empty() {
        return Err(Error::Precondition("hermite: no cases".into()));
    }
    let mut report = VerificationReport::new("hermite", 0..=(cases.len() as u32 - 1));
    for (x, m) in cases {
        if *m == 0 {
            return Err(Error::Precondition("hermite: m must be >= 1".into()));
        }
        let (lhs, rhs) = hermite_holds(x, *m);
        report.check_eq(|| format!("x={x}, m={m}"), &lhs, &rhs);
        report.cases_checked += 1;
    }
    Ok(report)
}

pub const HERMITE_SEED: u64 = 0x5eed_d3a7;

/// Deterministic random cases: `x = num/den` with `|num|, den <= 10⁶`,
/// `1 <= m <= 50`. Every fourth case has a denominator divisible by `m`.
pub fn hermite_random_cases(count: usize, seed: u64) -> Vec<(Rational, u32)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let m: u32 = rng.gen_range(1..=50);
            let num: i64 = rng.gen_range(-1_000_000..=1_000_000);
            let mut den: i64 = rng.gen_range(1..=1_000_000);
            if i % 4 == 0 {
                den = (den / i64::from(m)).max(1) * i64::from(m);
            }
            (Rational::new(Integer::from(num), Integer::from(den)), m)
        })
        .collect()
}

/// Cases `range` of the seeded random sequence.
pub fn verify_hermite_random(range: RangeInclusive<u32>) -> Result<VerificationReport> {
    require_range(&range, 0, 1_000_000, "hermite")?;
    let cases = hermite_random_cases(*range.end() as usize + 1, HERMITE_SEED);
    let mut report = verify_hermite_cases(&cases[*range.start() as usize..])?;
    report.range = range;
    Ok(report)
}

/// Hermite with `m = p+2`, `x = (p+1)!/e`, and the collapse of its terms:
/// the `k = 0` term is `⌊(p+1)!/e⌋` and every `1 <= k <= p+1` term is
/// `⌊((p+1)!+1)/e⌋`.
pub fn verify_hermite_factorial(range: RangeInclusive<u32>) -> Result<VerificationReport> {
    require_range(&range, 0, 150, "hermite-factorial")?;
    let mut report = VerificationReport::new("hermite-factorial", range.clone());
    for p in range {
        let f1 = factorial(p + 1);
        let x = ELaurent::int_over_e(f1.clone());
        let m = p + 2;
        let floor_x = el_floor(&x)?;
        let d_next = el_floor(&ELaurent::int_over_e(&f1 + 1))?;
        let mut total = Integer::zero();
        for k in 0..m {
            let shift = ELaurent::from_rational(Rational::new(Integer::from(k), Integer::from(m)));
            let term = el_floor(&(&x + &shift))?;
            let expected = if k == 0 { &floor_x } else { &d_next };
            report.check_eq(|| format!("p={p}, k={k}"), &term, expected);
            total += term;
        }
        let whole = el_floor(&ELaurent::int_over_e(f1 * m))?;
        report.check_eq(|| format!("p={p}, sum"), &total, &whole);
        report.cases_checked += 1;
    }
    Ok(report)
}

/// `-1/(p+2) < (p+1)!/e - ⌊((p+1)!+1)/e⌋ < 1/(p+2)`, both signs certified.
pub fn verify_fractional_bounds(range: RangeInclusive<u32>) -> Result<VerificationReport> {
    require_range(&range, 0, 150, "fractional-bounds")?;
    let mut report = VerificationReport::new("fractional-bounds", range.clone());
    for p in range {
        let f1 = factorial(p + 1);
        let y = el_floor(&ELaurent::int_over_e(&f1 + 1))?;
        let diff = &ELaurent::int_over_e(f1) - &ELaurent::from_integer(y);
        let bound = ELaurent::from_rational(Rational::new(Integer::one(), Integer::from(p + 2)));
        let above = el_sign(&(&diff + &bound))? == Ordering::Greater;
        let below = el_sign(&(&diff - &bound))? == Ordering::Less;
        report.check(
            || format!("p={p}, lower"),
            &diff,
            format!("> -{}", bound),
            above,
        );
        report.check(
            || format!("p={p}, upper"),
            &diff,
            format!("< {}", bound),
            below,
        );
        report.cases_checked += 1;
    }
    Ok(report)
}

/// `S_p = D(p+1) - (p mod 2)`.
pub fn verify_parity_identity(range: RangeInclusive<u32>) -> Result<VerificationReport> {
    require_range(&range, 0, 300, "parity")?;
    let mut report = VerificationReport::new("parity", range.clone());
    for p in range {
        let lhs = sum_rule_lhs(p);
        let rhs = derangements(p + 1) - Integer::from(p % 2);
        report.check_eq(|| format!("p={p}"), &lhs, &rhs);
        report.cases_checked += 1;
    }
    Ok(report)
}

/// `‖m!/e‖ - ⌊m!/e⌋ = 1` for even `m`, `0` for odd `m`.
pub fn verify_nearest_floor_split(range: RangeInclusive<u32>) -> Result<VerificationReport> {
    require_range(&range, 1, 300, "nearest-floor")?;
    let mut report = VerificationReport::new("nearest-floor", range.clone());
    for m in range {
        let x = ELaurent::int_over_e(factorial(m));
        let lhs = el_nearest(&x)? - el_floor(&x)?;
        let rhs = Integer::from(u32::from(m % 2 == 0));
        report.check_eq(|| format!("m={m}"), &lhs, &rhs);
        report.cases_checked += 1;
    }
    Ok(report)
}

/// `Σ_n C(p,n)·D(n) = p!` and `Σ_n C(p-l, n-l)·D(p-n) = (p-l)!` for `0 <= l < p`.
pub fn verify_binomial_identities(range: RangeInclusive<u32>) -> Result<VerificationReport> {
    require_range(&range, 1, 500, "binomial")?;
    let mut report = VerificationReport::new("binomial", range.clone());
    for p in range {
        let first = (0..=p).fold(Integer::zero(), |acc, n| {
            acc + binomial(p, i64::from(n)) * derangements(n)
        });
        report.check_eq(|| format!("p={p}"), &first, &factorial(p));
        for l in 0..p {
            let second = (0..=p).fold(Integer::zero(), |acc, n| {
                acc + binomial(p - l, i64::from(n) - i64::from(l)) * derangements(p - n)
            });
            report.check_eq(|| format!("p={p}, l={l}"), &second, &factorial(p - l));
        }
        report.cases_checked += 1;
    }
    Ok(report)
}

/// The sum rule itself.
pub fn verify_theorem1(range: RangeInclusive<u32>) -> Result<VerificationReport> {
    require_range(&range, 0, 2000, "theorem1")?;
    let mut report = VerificationReport::new("theorem1", range.clone());
    for p in range {
        report.check_eq(|| format!("p={p}"), &sum_rule_lhs(p), &sum_rule_rhs(p)?);
        report.cases_checked += 1;
    }
    Ok(report)
}

/// `S_p = A_{p+1}`.
pub fn verify_a_connection(range: RangeInclusive<u32>) -> Result<VerificationReport> {
    require_range(&range, 0, 2000, "a-connection")?;
    let mut report = VerificationReport::new("a-connection", range.clone());
    for p in range {
        report.check_eq(|| format!("p={p}"), &sum_rule_lhs(p), &a_recurrence(p + 1)?);
        report.cases_checked += 1;
    }
    Ok(report)
}

/// `N! Σ_{k=2..N} (-1)^k/k!` against `A_N` from the recurrence and against
/// `⌊N!/e⌋`. The closed form equals D(N), so this fails at every even N;
/// the checker exists to report that range.
pub fn verify_a_closed_form(range: RangeInclusive<u32>) -> Result<VerificationReport> {
    require_range(&range, 1, 2000, "a-closed-form")?;
    let mut report = VerificationReport::new("a-closed-form", range.clone());
    for n in range {
        let closed = a_closed_form(n)?;
        report.check_eq(|| format!("N={n}"), &closed, &a_recurrence(n)?);
        report.check_eq(|| format!("N={n}, floor"), &closed, &a_floor_formula(n)?);
        report.cases_checked += 1;
    }
    Ok(report)
}

/// Every D(n) method against brute-force enumeration, and `S_p` against the
/// enumerated sum for `p <= min(n_max, 10)`. The floor and nearest-integer
/// formulas are compared for `n >= 1` only; at n = 0 they give 0 while
/// D(0) = 1.
pub fn verify_oracle(range: RangeInclusive<u32>) -> Result<VerificationReport> {
    require_range(&range, 0, DEFAULT_ENUMERATION_CAP as u32, "oracle")?;
    let mut report = VerificationReport::new("oracle", range.clone());
    for n in range {
        let brute = brute_derangement_count(n as usize)?;
        let mut methods = vec![
            ("sum", d_sum(n)?),
            ("pair", d_pair_recurrence(n)),
            ("signed", d_signed_recurrence(n)),
        ];
        if n >= 1 {
            methods.push(("floor", d_floor_formula(n)?));
            methods.push(("nearest", d_nearest_formula(n)?));
        }
        for (name, value) in &methods {
            report.check_eq(|| format!("n={n}, method={name}"), value, &brute);
        }
        if n as usize <= SUM_RULE_CAP {
            let s = sum_rule_lhs(n);
            report.check_eq(
                || format!("p={n}, sum rule"),
                &s,
                &brute_sum_rule(n as usize)?,
            );
        }
        report.cases_checked += 1;
    }
    Ok(report)
}

/// Named checkers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Identity {
    Theorem1,
    Toprove,
    Has1,
    Has2,
    Iint,
    Hermite,
    HermiteFactorial,
    FractionalBounds,
    Parity,
    NearestFloor,
    Binomial,
    AConnection,
    Oracle,
    AClosedForm,
}

/// Range profile for a checker run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    Quick,
    Full,
}

impl Identity {
    /// Checkers run by `all`, in order. `AClosedForm` is excluded because it
    /// fails by construction at even N.
    pub const SUITE: [Identity; 13] = [
        Identity::Theorem1,
        Identity::Toprove,
        Identity::Has1,
        Identity::Has2,
        Identity::Iint,
        Identity::Hermite,
        Identity::HermiteFactorial,
        Identity::FractionalBounds,
        Identity::Parity,
        Identity::NearestFloor,
        Identity::Binomial,
        Identity::AConnection,
        Identity::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::Theorem1 => "theorem1",
            Identity::Toprove => "toprove",
            Identity::Has1 => "has1",
            Identity::Has2 => "has2",
            Identity::Iint => "iint",
            Identity::Hermite => "hermite",
            Identity::HermiteFactorial => "hermite-factorial",
            Identity::FractionalBounds => "fractional-bounds",
            Identity::Parity => "parity",
            Identity::NearestFloor => "nearest-floor",
            Identity::Binomial => "binomial",
            Identity::AConnection => "a-connection",
            Identity::Oracle => "oracle",
            Identity::AClosedForm => "a-closed-form",
        }
    }

    pub fn from_name(name: &str) -> Option<Identity> {
        Identity::SUITE
            .iter()
            .chain(std::iter::once(&Identity::AClosedForm))
            .copied()
            .find(|i| i.name() == name)
    }

    /// Default range for a profile.
    pub fn default_range(self, profile: Profile) -> RangeInclusive<u32> {
        let quick = profile == Profile::Quick;
        match self {
            Identity::Theorem1
            | Identity::Toprove
            | Identity::Iint
            | Identity::Parity
            | Identity::AConnection => {
                if quick {
                    0..=50
                } else {
                    0..=200
                }
            }
            Identity::Has1 | Identity::Has2 => {
                if quick {
                    1..=50
                } else {
                    1..=100
                }
            }
            Identity::HermiteFactorial | Identity::FractionalBounds => {
                if quick {
                    0..=50
                } else {
                    0..=100
                }
            }
            Identity::NearestFloor => {
                if quick {
                    1..=51
                } else {
                    1..=201
                }
            }
            Identity::Hermite => 0..=999,
            Identity::Binomial => 1..=50,
            Identity::Oracle => {
                if quick {
                    0..=8
                } else {
                    0..=9
                }
            }
            Identity::AClosedForm => {
                if quick {
                    1..=50
                } else {
                    1..=200
                }
            }
        }
    }

    pub fn run(self, range: RangeInclusive<u32>) -> Result<VerificationReport> {
        match self {
            Identity::Theorem1 => verify_theorem1(range),
            Identity::Toprove => verify_toprove(range),
            Identity::Has1 => verify_has1(range),
            Identity::Has2 => verify_has2(range),
            Identity::Iint => verify_iint(range),
            Identity::Hermite => verify_hermite_random(range),
            Identity::HermiteFactorial => verify_hermite_factorial(range),
            Identity::FractionalBounds => verify_fractional_bounds(range),
            Identity::Parity => verify_parity_identity(range),
            Identity::NearestFloor => verify_nearest_floor_split(range),
            Identity::Binomial => verify_binomial_identities(range),
            Identity::AConnection => verify_a_connection(range),
            Identity::Oracle => verify_oracle(range),
            Identity::AClosedForm => verify_a_closed_form(range),
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
