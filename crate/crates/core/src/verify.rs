//! Self-contained verification suite.
//!
//! Each criterion recomputes its reference values independently of the code
//! path under test (closed forms, binomial sums, direct entropy sums) and
//! reports every comparison with its tolerance. Randomized criteria draw from
//! a ChaCha8 stream derived from the suite seed and the criterion id, so a
//! report is a pure function of the seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coding::{
    avg_letter_entropy, blocking_sequence, ensemble_state, holevo_chi, refactorization_ledger,
    tradeoff_curve, tradeoff_point, typical_subspace, verify_refactorization_unitary, Alphabet,
};
use crate::error::Result;
use crate::protocols::{
    bell_protocol, classical_pair_protocol, ghz_state, ghz_unlock, parity_no_information_check,
    parity_unlock, random_parity_channel,
};
use crate::qcore::{partial_trace, von_neumann_entropy, CVector, DensityMatrix, PureState, C64};
use crate::thermo::{extractable_work, remote_carnot, ThermalContext, BOLTZMANN};

pub const DEFAULT_SEED: u64 = 0x5149_4845;

/// Number of suites run by [`run_suite`].
pub const CRITERIA: u8 = 9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub label: String,
    pub measured: f64,
    pub tolerance: f64,
    /// Unit of `measured` and `tolerance`: `"bit"` in natural units or `"1"`.
    pub units: &'static str,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub passed: bool,
    pub criteria: Vec<CriterionResult>,
}

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    /// `measured` is a deviation in bits; passes when `measured <= tolerance`.
    fn within(&mut self, label: impl Into<String>, measured: f64, tolerance: f64) {
        self.push(label.into(), measured, tolerance, "bit");
    }

    /// Dimensionless deviation.
    fn ratio(&mut self, label: impl Into<String>, measured: f64, tolerance: f64) {
        self.push(label.into(), measured, tolerance, "1");
    }

    fn push(&mut self, label: String, measured: f64, tolerance: f64, units: &'static str) {
        self.0.push(Check {
            label,
            measured,
            tolerance,
            units,
            passed: measured <= tolerance,
        });
    }

    fn holds(&mut self, label: impl Into<String>, ok: bool) {
        self.0.push(Check {
            label: label.into(),
            measured: if ok { 0.0 } else { 1.0 },
            tolerance: 0.0,
            units: "1",
            passed: ok,
        });
    }
}

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        ((a - b) / b).abs()
    }
}

fn rng_for(seed: u64, id: u8) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(
        seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
            .wrapping_add(id as u64),
    )
}

fn ket(amps: &[(f64, f64)]) -> DensityMatrix {
    let v = CVector::from_iterator(amps.len(), amps.iter().map(|&(re, im)| C64::new(re, im)));
    PureState::new(v, vec![amps.len()])
        .expect("normalized")
        .to_density()
}

fn zero_plus() -> Alphabet {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Alphabet::uniform(vec![
        ket(&[(1.0, 0.0), (0.0, 0.0)]),
        ket(&[(s, 0.0), (s, 0.0)]),
    ])
    .expect("valid alphabet")
}

fn orthogonal_pair() -> Alphabet {
    Alphabet::uniform(vec![
        ket(&[(1.0, 0.0), (0.0, 0.0)]),
        ket(&[(0.0, 0.0), (1.0, 0.0)]),
    ])
    .expect("valid alphabet")
}

fn szilard(_: u64, c: &mut Checks) -> Result<()> {
    let pure = DensityMatrix::basis(&[2], 0)?;
    let w = extractable_work(&pure, &ThermalContext::natural())?;
    c.within("natural: |W - 1|", (w.work - 1.0).abs(), 0.0);
    let si = extractable_work(&pure, &ThermalContext::si(300.0)?)?;
    let expected = BOLTZMANN * 300.0 * std::f64::consts::LN_2;
    c.ratio(
        "SI 300 K: relative error vs k_B T ln2",
        rel(si.work, expected),
        1e-15,
    );
    Ok(())
}

fn bell(_: u64, c: &mut Checks) -> Result<()> {
    let ctx = ThermalContext::natural();
    let open = bell_protocol(&ctx, false)?;
    let bell_work = open.expected_total_work();
    c.within("Bell pair: |W - 2|", (bell_work - 2.0).abs(), 1e-12);
    let tapped = bell_protocol(&ctx, true)?;
    c.within(
        "interceptor work",
        tapped.interceptor_work.work.abs(),
        1e-12,
    );
    let classical = classical_pair_protocol(&ctx)?.expected_total_work();
    c.within(
        "classical pair: |W - W_bell / 2|",
        (classical - bell_work / 2.0).abs(),
        1e-12,
    );
    Ok(())
}

fn carnot(seed: u64, c: &mut Checks) -> Result<()> {
    let mut rng = rng_for(seed, 3);
    let (mut worst_w, mut worst_eta) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let t1 = rng.random_range(1.0..1000.0);
        let t2 = t1 + rng.random_range(1.0..1000.0);
        let r = remote_carnot(t1, t2)?;
        let q2 = BOLTZMANN * std::f64::consts::LN_2 * t2;
        worst_w = worst_w.max(rel(r.work_per_qubit, q2 * (1.0 - t1 / t2)));
        worst_eta = worst_eta.max(rel(r.efficiency, 1.0 - t1 / t2));
    }
    c.ratio(
        "100 pairs: relative error of W vs Q2 (1 - T1/T2)",
        worst_w,
        1e-12,
    );
    c.ratio("100 pairs: relative error of efficiency", worst_eta, 1e-12);
    Ok(())
}

fn ghz(_: u64, c: &mut Checks) -> Result<()> {
    let ctx = ThermalContext::natural();
    let half = DensityMatrix::maximally_mixed(&[2])?;
    for n in 2..=6 {
        let rho = ghz_state(n)?.to_density();
        let mut worst = 0.0f64;
        for q in 0..n {
            worst = worst.max(partial_trace(&rho, &[q])?.max_deviation(half.matrix()));
        }
        c.ratio(format!("n={n}: marginal deviation from I/2"), worst, 1e-12);
        let out = ghz_unlock(n, 0, &ctx)?;
        c.holds(format!("n={n}: two branches"), out.branches.len() == 2);
        let worst = out
            .branches
            .iter()
            .map(|b| (b.total_work() - (n - 1) as f64).abs())
            .fold(0.0, f64::max);
        c.within(format!("n={n}: |unlocked work - (n-1)|"), worst, 0.0);
    }
    Ok(())
}

fn parity(seed: u64, c: &mut Checks) -> Result<()> {
    let mut rng = rng_for(seed, 5);
    let ctx = ThermalContext::natural();
    for n in 3..=5 {
        let mut worst = 0.0f64;
        for _ in 0..20 {
            let kraus = rng.random_range(1..=4);
            let ch = random_parity_channel(n, kraus, &mut rng)?;
            worst = worst.max(parity_no_information_check(n, &ch)?.rho1_deviation);
        }
        c.ratio(format!("n={n}: 20 channels, max |ρ'_1 - I/2|"), worst, 1e-9);

        let bits: Vec<usize> = (1..n).map(|_| rng.random_range(0..=1)).collect();
        let revealed: Vec<(usize, usize)> = (1..n).zip(bits.iter().copied()).collect();
        let out = parity_unlock(n, &revealed, &ctx)?;
        let entropy = out
            .branches
            .iter()
            .flat_map(|b| b.per_party_work.values())
            .map(|w| 1.0 - w.entropy_delta)
            .fold(0.0, f64::max);
        c.within(
            format!("n={n}: entropy of completed qubit after n-1 revelations"),
            entropy,
            1e-10,
        );
    }
    Ok(())
}

fn random_alphabet(rng: &mut ChaCha8Rng) -> Result<Alphabet> {
    let d = rng.random_range(2..=4);
    let count = rng.random_range(1..=5);
    let letters = (0..count)
        .map(|_| DensityMatrix::random(&[d], rng))
        .collect::<Result<Vec<_>>>()?;
    let raw: Vec<f64> = (0..count).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    Alphabet::new(letters, raw.iter().map(|p| p / total).collect())
}

fn mutual_limitation(seed: u64, c: &mut Checks) -> Result<()> {
    let mut rng = rng_for(seed, 6);
    let ctx = ThermalContext::natural();
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let a = random_alphabet(&mut rng)?;
        let p = tradeoff_point(&a, &ctx)?;
        // reference terms from the engine and Holevo code paths
        let e_bits = extractable_work(&ensemble_state(&a), &ctx)?.work;
        let chi = holevo_chi(&a)?;
        let s_avg: f64 = a
            .letters()
            .iter()
            .zip(a.probs())
            .map(|(l, &q)| Ok(q * von_neumann_entropy(l)?))
            .sum::<Result<f64>>()?;
        let m = (a.dim() as f64).log2();
        worst = worst
            .max((e_bits + chi + s_avg - m).abs())
            .max((p.energy_bits + p.comm_bits + p.avg_letter_entropy - m).abs());
    }
    c.within("100 alphabets: |E + C + <S_a> - M|", worst, 1e-12);

    let chi = holevo_chi(&zero_plus())?;
    let r2 = std::f64::consts::SQRT_2;
    let oracle: f64 = [(2.0 + r2) / 4.0, (2.0 - r2) / 4.0]
        .iter()
        .map(|l| -l * l.log2())
        .sum();
    c.within("{|0>,|+>}: |χ - h((2±√2)/4)|", (chi - oracle).abs(), 1e-10);
    Ok(())
}

/// `(capture, count)` of the typical classes of a Bernoulli(`p`) source.
fn binomial_oracle(p: f64, l: usize, delta: f64) -> (f64, f64) {
    let s = -(p * p.log2() + (1.0 - p) * (1.0 - p).log2());
    let lf = l as f64;
    let (mut capture, mut count) = (0.0, 0.0);
    let mut binom = 1.0f64;
    for k in 0..=l {
        if k > 0 {
            binom = binom * (l - k + 1) as f64 / k as f64;
        }
        let rate = -((lf - k as f64) * (1.0 - p).log2() + k as f64 * p.log2()) / lf;
        if (rate - s).abs() <= delta {
            capture += binom * (1.0 - p).powi((l - k) as i32) * p.powi(k as i32);
            count += binom;
        }
    }
    (capture, count)
}

fn typicality(_: u64, c: &mut Checks) -> Result<()> {
    let rho = DensityMatrix::diagonal(&[2], &[0.9, 0.1])?;
    let mut last = f64::NEG_INFINITY;
    for l in [8, 16, 24] {
        let t = typical_subspace(&rho, l, 0.2)?;
        let (oracle, count) = binomial_oracle(0.1, l, 0.2);
        c.ratio(
            format!("L={l}: |capture - binomial sum|"),
            (t.capture_probability - oracle).abs(),
            1e-12,
        );
        c.holds(
            format!("L={l}: capture nondecreasing"),
            t.capture_probability >= last,
        );
        last = t.capture_probability;
        let dim = t.dim.map(|d| d as f64).unwrap_or(f64::INFINITY);
        c.holds(
            format!("L={l}: d_Λ equals the typical class count"),
            dim == count,
        );
        c.holds(
            format!("L={l}: d_Λ <= 2^(L(S+δ))"),
            dim <= (l as f64 * (t.source_entropy + 0.2)).exp2(),
        );
    }
    Ok(())
}

fn refactorization(_: u64, c: &mut Checks) -> Result<()> {
    let a = orthogonal_pair();
    let r = refactorization_ledger(&a, 10, 0.1, &ThermalContext::natural())?;
    let (capture, _) = binomial_oracle(0.5, 10, 0.1);
    let eps = 1.0 - capture;
    c.ratio("ε vs binomial oracle", (r.epsilon - eps).abs(), 1e-12);
    let lower = 1.0 * (1.0 - 2.0 * eps) - 1.0 * (1.0 + 0.1);
    let upper = 0.0;
    let outside = (lower - r.net_per_letter)
        .max(r.net_per_letter - upper)
        .max(0.0);
    c.within(
        "L=10: distance of net work per letter outside the bracket",
        outside,
        1e-12,
    );

    let s = std::f64::consts::FRAC_1_SQRT_2;
    let letters = vec![ket(&[(1.0, 0.0), (0.0, 0.0)]), ket(&[(s, 0.0), (s, 0.0)])];
    let skewed = Alphabet::new(letters, vec![0.7, 0.3])?;
    for (name, alphabet, delta) in [("orthogonal", &a, 0.1), ("{|0>,|+>}", &skewed, 0.6)] {
        for l in 1..=3 {
            let u = verify_refactorization_unitary(alphabet, l, delta)?;
            c.ratio(
                format!("{name} L={l}: unitarity residual"),
                u.unitarity_residual,
                1e-10,
            );
            c.ratio(
                format!("{name} L={l}: mapping residual on the Γ basis"),
                u.mapping_residual,
                1e-10,
            );
            c.ratio(
                format!("{name} L={l}: |0>_L population vs capture"),
                (u.zero_register_population - u.capture_probability).abs(),
                1e-10,
            );
        }
    }
    Ok(())
}

fn blocking(_: u64, c: &mut Checks) -> Result<()> {
    let a = zero_plus();
    let bound = a.capacity_bits() - avg_letter_entropy(&a)?;
    let seq = blocking_sequence(&a, 4)?;
    for pair in seq.windows(2) {
        c.holds(
            format!("E'/n nondecreasing from n={} to n={}", pair[0].n, pair[1].n),
            pair[1].energy_bits_per_letter >= pair[0].energy_bits_per_letter - 1e-12,
        );
    }
    let excess = seq
        .iter()
        .map(|p| p.energy_bits_per_letter - bound)
        .fold(f64::NEG_INFINITY, f64::max)
        .max(0.0);
    c.within("max excess of E'/n over M - <S_a>", excess, 1e-12);

    let curve = tradeoff_curve(&orthogonal_pair(), &ThermalContext::natural())?;
    let dev_comm = (curve.max_comm.comm_bits - 1.0)
        .abs()
        .max(curve.max_comm.energy_bits.abs());
    let dev_energy = curve
        .max_energy
        .comm_bits
        .abs()
        .max((curve.max_energy.energy_bits - 1.0).abs());
    c.within(
        "orthogonal pair: endpoint (χ, M - S) vs (1, 0)",
        dev_comm,
        1e-12,
    );
    c.within(
        "orthogonal pair: endpoint (0, M - <S_a>) vs (0, 1)",
        dev_energy,
        1e-12,
    );
    Ok(())
}

type Suite = fn(u64, &mut Checks) -> Result<()>;

const SUITES: [(u8, &str, Suite); CRITERIA as usize] = [
    (1, "Szilard unit", szilard),
    (2, "Bell superdense energy", bell),
    (3, "remote Carnot", carnot),
    (4, "GHZ unlock", ghz),
    (5, "parity no-information", parity),
    (6, "mutual limitation", mutual_limitation),
    (7, "typicality", typicality),
    (8, "refactorization ledger", refactorization),
    (9, "blocking limit", blocking),
];

/// Run one criterion. `id` must be in `1..=CRITERIA`.
pub fn run_criterion(id: u8, seed: u64) -> Option<CriterionResult> {
    let &(id, name, suite) = SUITES.iter().find(|s| s.0 == id)?;
    let mut checks = Checks::default();
    let error = suite(seed, &mut checks).err().map(|e| e.to_string());
    let passed = error.is_none() && !checks.0.is_empty() && checks.0.iter().all(|c| c.passed);
    Some(CriterionResult {
        id,
        name: name.to_owned(),
        passed,
        checks: checks.0,
        error,
    })
}

pub fn run_suite(seed: u64) -> VerifyReport {
    let criteria: Vec<CriterionResult> = (1..=CRITERIA)
        .filter_map(|id| run_criterion(id, seed))
        .collect();
    VerifyReport {
        seed,
        passed: criteria.iter().all(|c| c.passed),
        criteria,
    }
}
