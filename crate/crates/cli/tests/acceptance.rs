//! Acceptance criteria A1 to A12. Prints one PASS/FAIL line per criterion
//! and exits non-zero if any criterion fails.

use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};

use nwlab_core::adversary::{
    attack_success_census, exact_advantage, hybrid_acceptance, hybrid_sample, leakage_identity,
    Distinguisher, DistinguisherSpec,
};
use nwlab_core::derand::{
    derandomize_decision, derandomize_search, induced_distinguisher, pad, promise_answer, unpad,
    ExceptionTable, InducedDecision, NoisyDecider, Predicate, RandomizedDecider,
};
use nwlab_core::design::{design_from_polynomials, gen_design_greedy, gen_design_km, verify_design};
use nwlab_core::hamming::{bad_set_bound, binary_entropy, hamming_ball_volume};
use nwlab_core::nwprg::derive_paper_params;
use nwlab_core::searchprob::{finder_failure_bound, finder_success, ToySearch};
use nwlab_core::{
    BitString, HardnessParams, HardnessProblem, Membership, Oracle, RandomStream, SearchProblem,
    TargetedPrg,
};

type Outcome = Result<String, String>;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// A1: every generated design verifies; integral KM cases meet the floor.
fn a1() -> Outcome {
    let mut cases = 0;
    for d in (6..=64).step_by(2) {
        for r in 2..=4usize {
            for s in 0..r {
                for m in [6usize, 24] {
                    if d <= r {
                        continue;
                    }
                    let build = gen_design_greedy(d, r, s, m).map_err(err)?;
                    let report = verify_design(&build.design);
                    check(report.valid, || format!("greedy ({d},{r},{s},{m}): {report:?}"))?;
                    cases += 1;
                }
            }
        }
    }
    let mut km_integral = 0;
    for d in 4..=64usize {
        for alpha in [Rational64::new(1, 3), Rational64::new(1, 4), Rational64::new(1, 5)] {
            let Ok(km) = gen_design_km(d, alpha) else { continue };
            let report = verify_design(&km.design);
            check(report.valid, || format!("km d={d} alpha={alpha}: {report:?}"))?;
            if km.integral {
                km_integral += 1;
                check(km.meets_floor, || format!("km d={d} alpha={alpha} below its floor"))?;
            }
            cases += 1;
        }
    }
    for p in [2u64, 3, 5, 7] {
        for degree in 1..p as usize {
            let total = p.pow(degree as u32 + 1).min(64) as usize;
            for m in [1, total / 2, total] {
                if m == 0 {
                    continue;
                }
                let design = design_from_polynomials(p, degree, m).map_err(err)?;
                let report = verify_design(&design);
                check(report.valid, || format!("polynomial p={p} degree={degree}: {report:?}"))?;
                cases += 1;
            }
        }
    }
    check(cases >= 200, || format!("only {cases} cases"))?;
    Ok(format!("{cases} designs valid, {km_integral} integral km cases meet the size floor"))
}

/// A2: pad/unpad round trip and length floor, exhaustively.
fn a2() -> Outcome {
    let mut cases = 0u64;
    for len in 0..=12 {
        for x in BitString::all(len) {
            for k in 0..=40 {
                let p = pad(&x, k);
                check(p.raw.len() == k.max(2 * len), || format!("length of pad({x}, {k})"))?;
                check(unpad(&p.raw).map_err(err)? == x, || format!("unpad(pad({x}, {k}))"))?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} cases, zero failures"))
}

fn random_distinguisher(rng: &mut RandomStream, m: usize) -> DistinguisherSpec {
    match rng.below(6) {
        0 => DistinguisherSpec::Table { table: rng.next_bits(1 << m) },
        1 => DistinguisherSpec::Bit { index: rng.below(m as u64) as usize },
        2 => DistinguisherSpec::Parity,
        3 => DistinguisherSpec::Majority,
        4 => DistinguisherSpec::Equals { string: rng.next_bits(m) },
        _ => DistinguisherSpec::SeededTable { key: rng.below(1 << 20) },
    }
}

/// A random toy generator with `m` outputs, `d <= 10` and a random table.
fn random_prg(rng: &mut RandomStream, m: usize) -> (TargetedPrg, BitString) {
    loop {
        let r = 2 + rng.below(2) as usize;
        let s = 1 + rng.below((r - 1) as u64) as usize;
        let d = (r + 3 + rng.below(4) as usize).min(10);
        let Ok(build) = gen_design_greedy(d, r, s, m) else { continue };
        if build.design.len() < m {
            continue;
        }
        let n = 1 << r;
        let table = rng.next_bits(n);
        let x = rng.next_bits(n);
        let prg = TargetedPrg::with_oracle(&build.design, Oracle::Table(table), m).expect("valid design");
        return (prg, x);
    }
}

/// A3: the hybrids telescope exactly and their endpoints match brute force.
fn a3() -> Outcome {
    let mut rng = RandomStream::new(3).split("a3");
    let none = BitString::new();
    for instance in 0..50 {
        let m = 1 + rng.below(8) as usize;
        let (prg, x) = random_prg(&mut rng, m);
        let d = random_distinguisher(&mut rng, m);
        let hybrids: Vec<BigRational> = (0..=m)
            .map(|j| hybrid_acceptance(&d, &prg, &x, j))
            .collect::<Result<_, _>>()
            .map_err(err)?;
        let steps: BigRational = hybrids.windows(2).map(|w| &w[1] - &w[0]).sum();
        check(steps == &hybrids[m] - &hybrids[0], || format!("instance {instance}: telescoping"))?;

        let mut on_generator = 0u64;
        for (_, out) in prg.enumerate_outputs(&x).map_err(err)? {
            on_generator += d.decide(&x, &out, &none).map_err(err)? as u64;
        }
        let mut on_uniform = 0u64;
        for u in BitString::all(m) {
            on_uniform += d.decide(&x, &u, &none).map_err(err)? as u64;
        }
        check(
            hybrids[m] == BigRational::new(on_generator.into(), BigInt::one() << prg.d()),
            || format!("instance {instance}: P[D(G)]"),
        )?;
        check(
            hybrids[0] == BigRational::new(on_uniform.into(), BigInt::one() << m),
            || format!("instance {instance}: P[D(U)]"),
        )?;

        let j = rng.below(m as u64 + 1) as usize;
        let mut hits = 0u64;
        for seed in BitString::all(prg.d()) {
            for fill in BitString::all(m - j) {
                let sample = hybrid_sample(&prg, &x, j, &seed, &fill).map_err(err)?;
                hits += d.decide(&x, &sample, &none).map_err(err)? as u64;
            }
        }
        check(
            hybrids[j] == BigRational::new(hits.into(), BigInt::one() << (prg.d() + m - j)),
            || format!("instance {instance}: H_{j}"),
        )?;
    }
    Ok("50 instances, telescoping exact, endpoints and a middle hybrid match brute force".into())
}

/// A4: planted instances with positive advantage meet the census bound.
fn a4() -> Outcome {
    let mut rng = RandomStream::new(4).split("a4");
    let mut instances = 0;
    let mut tried = 0;
    let mut worst = None::<BigRational>;
    while instances < 12 {
        tried += 1;
        check(tried < 500, || format!("only {instances} instances with beta > 0"))?;
        let s = 1 + rng.below(3) as usize;
        let design = gen_design_greedy(10, 4, s, 4).map_err(err)?.design;
        if design.len() < 4 {
            continue;
        }
        // A biased table so that single output bits lean one way.
        let ones = rng.below(17) as usize;
        let mut positions: Vec<usize> = (0..16).collect();
        for i in (1..16).rev() {
            positions.swap(i, rng.below(i as u64 + 1) as usize);
        }
        let mut table = BitString::zeros(16);
        for &p in &positions[..ones] {
            table.set(p, true);
        }
        let prg = TargetedPrg::with_oracle(&design, Oracle::Table(table), 4).map_err(err)?;
        let x = rng.next_bits(16);
        let d = random_distinguisher(&mut rng, 4);
        let adv = exact_advantage(&d, &prg, &x).map_err(err)?;
        if adv.beta <= BigRational::zero() {
            continue;
        }
        let report = attack_success_census(&d, &prg, &x).map_err(err)?;
        check(report.pass && report.fraction >= report.bound, || {
            format!("census below bound: {report}")
        })?;
        let slack = &report.fraction / &report.bound;
        if worst.as_ref().is_none_or(|w| slack < *w) {
            worst = Some(slack);
        }
        instances += 1;
    }
    Ok(format!(
        "{instances} planted instances, smallest fraction/bound ratio {}",
        worst.unwrap()
    ))
}

/// A5: the leakage-length identity holds exactly; epsilon < 1 at 1/3.
fn a5() -> Outcome {
    let mut cases = 0;
    for alpha in [Rational64::new(1, 3), Rational64::new(1, 4), Rational64::new(1, 5)] {
        for log_n in [135u64, 270, 405] {
            let (lhs, rhs) = leakage_identity(alpha, log_n);
            check(lhs == rhs, || format!("alpha={alpha} log n={log_n}: {lhs} != {rhs}"))?;
            cases += 1;
        }
    }
    let params = derive_paper_params(2, Rational64::new(1, 3), 3).map_err(err)?;
    check(params.epsilon < Rational64::from_integer(1), || format!("epsilon = {}", params.epsilon))?;
    Ok(format!("{cases} grid points exact, epsilon = {} at alpha = 1/3", params.epsilon))
}

/// A6: exhaustive bad-set census for every short machine pair.
fn a6() -> Outcome {
    let mut sweeps = 0;
    let mut pairs = 0;
    for n in [6usize, 8, 10] {
        let mut dists = vec![1, n / 4];
        dists.dedup();
        let mut rng = RandomStream::new(6).split(&format!("a6:{n}"));
        let targets = [BitString::zeros(n), rng.next_bits(n), rng.next_bits(n)];
        for ell in 0..=2 {
            for &dist in &dists {
                let params = HardnessParams {
                    max_desc_bits: 4,
                    ..HardnessParams::new(n, 2, 2, ell, dist)
                };
                let problem = HardnessProblem::new(params).map_err(err)?;
                for x in &targets {
                    let sweep = problem.random_is_hard_sweep(x).map_err(err)?;
                    check(sweep.violations == 0, || {
                        format!("n={n} ell={ell} dist={dist} x={x}: {} violations", sweep.violations)
                    })?;
                    sweeps += 1;
                    pairs += sweep.pairs;
                }
            }
        }
    }
    Ok(format!("{sweeps} sweeps, {pairs} program pairs, zero violations"))
}

/// A7: vol(n, r) <= 2^(n H(r/n)), checked exactly as
/// vol * r^r * (n-r)^(n-r) <= n^n.
fn a7() -> Outcome {
    let mut cases = 0;
    for n in 1..=24u64 {
        for r in 1..=n / 2 {
            let vol = hamming_ball_volume(n, r).map_err(err)?;
            let lhs = &vol * BigUint::from(r).pow(r as u32) * BigUint::from(n - r).pow((n - r) as u32);
            let rhs = BigUint::from(n).pow(n as u32);
            check(lhs <= rhs, || format!("n={n} r={r}"))?;
            // The floating form agrees.
            let h = binary_entropy(r as f64 / n as f64).map_err(err)?;
            check((vol.bits() as f64 - 1.0) <= n as f64 * h, || format!("n={n} r={r} float form"))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} (n, r) pairs"))
}

/// Generator for the decision derandomizer: `r = 5`, so targets have 32
/// bits, and a fixed 32-bit table drawn from `key`.
fn derand_prg(m: usize, key: u64) -> Result<TargetedPrg, String> {
    let design = gen_design_greedy(10, 5, 2, m).map_err(err)?.design;
    check(design.len() >= m, || format!("design has only {} sets", design.len()))?;
    let table = RandomStream::new(key).split("table").next_bits(32);
    TargetedPrg::with_oracle(&design, Oracle::Table(table), m).map_err(err)
}

/// The first table key, from `base` on, under which the generator fools the
/// decider's induced distinguisher to within 1/6 on the empty input.
fn fooling_prg(decider: &NoisyDecider, base: u64) -> Result<(TargetedPrg, u64), String> {
    for key in base..base + 64 {
        let prg = derand_prg(decider.coins, key)?;
        let induced = InducedDecision { decider };
        let x_prime = pad(&BitString::new(), prg.n()).raw;
        if exact_advantage(&induced, &prg, &x_prime).map_err(err)?.beta < q(1, 6) {
            return Ok((prg, key));
        }
    }
    Err(format!("no table fools {}", decider.label()))
}

/// A8: the decision derandomizer on 20 noisy fixtures.
fn a8() -> Outcome {
    let predicates = [
        Predicate::Parity,
        Predicate::Majority,
        Predicate::FirstBit,
        Predicate::ContainsOneOne,
        Predicate::WeightAtLeast { k: 2 },
        Predicate::WeightAtLeast { k: 4 },
        Predicate::Palindrome,
        Predicate::Constant { value: true },
        Predicate::Constant { value: false },
        Predicate::Majority,
    ];
    let mut inputs = 0u64;
    let mut fixtures = 0;
    let none = ExceptionTable::default();
    for (i, predicate) in predicates.iter().enumerate() {
        for variant in 0..2 {
            let coins = 3 + (i + variant) % 3;
            let noise = [variant, coins - 1];
            let decider = NoisyDecider { predicate: *predicate, coins, noise };
            let (prg, _) = fooling_prg(&decider, 1000 * (2 * i + variant) as u64)?;
            let induced = InducedDecision { decider: &decider };
            for len in 0..=10 {
                for x in BitString::all(len) {
                    let answer = promise_answer(&decider, &x)
                        .map_err(err)?
                        .ok_or_else(|| format!("{} breaks the promise on {x}", decider.label()))?;
                    let x_prime = pad(&x, prg.n()).raw;
                    let adv = exact_advantage(&induced, &prg, &x_prime).map_err(err)?;
                    check(adv.beta < q(1, 6), || {
                        format!("{} on {x}: induced advantage {}", decider.label(), adv.beta)
                    })?;
                    let run = derandomize_decision(&decider, &prg, &x, prg.n(), &none).map_err(err)?;
                    check(run.answer == answer, || format!("{} on {x}: wrong answer", decider.label()))?;
                    inputs += 1;
                }
            }
            fixtures += 1;
        }
    }
    Ok(format!("{fixtures} fixtures, {inputs} promise inputs, all answers match"))
}

/// A9: the search derandomizer on 10 toy fixtures.
fn a9() -> Outcome {
    let kinds = [
        ToySearch::Identity,
        ToySearch::Complement,
        ToySearch::Reverse,
        ToySearch::NearCopy,
        ToySearch::Agreement,
        ToySearch::ParityWitness,
    ];
    let none = ExceptionTable::default();
    let mut covered = 0u64;
    let mut fixtures = 0;
    let two_thirds = q(2, 3);
    for f in 0..10 {
        let problem = kinds[f % kinds.len()].clone();
        let design = gen_design_greedy(8, 4, 2, 4).map_err(err)?.design;
        let prg = TargetedPrg::with_oracle(&design, Oracle::Seeded(900 + f as u64), 4).map_err(err)?;
        for len in 0..=8 {
            for x in BitString::all(len) {
                if finder_success(&problem, &x).map_err(err)? < two_thirds {
                    continue;
                }
                let x_prime = pad(&x, prg.n()).raw;
                let adv = exact_advantage(&induced_distinguisher(&problem), &prg, &x_prime).map_err(err)?.beta;
                check(adv < two_thirds, || format!("{problem:?} on {x}: induced advantage {adv}"))?;
                let run = derandomize_search(&problem, &prg, &x, prg.n(), &none).map_err(err)?;
                let accepted = problem.verify_exact(&x, &run.witness).map_err(err)?;
                let membership = problem.membership(&x, &run.witness).map_err(err)?;
                check(accepted && membership != Some(Membership::No), || {
                    format!("{problem:?} on {x}: returned {:?}", run.witness.to_string())
                })?;
                covered += 1;
            }
        }
        fixtures += 1;
    }
    Ok(format!("{fixtures} fixtures, {covered} inputs in S_R, all answers non-no"))
}

/// A10: the sampled verifier against the exact oracle at n = 8.
fn a10() -> Outcome {
    let params = HardnessParams {
        max_desc_bits: 4,
        ..HardnessParams::new(8, 2, 2, 1, 2)
    };
    let problem = HardnessProblem::new(params).map_err(err)?;
    let mut rng = RandomStream::new(10).split("a10");
    let mut instances: Vec<(BitString, BitString, bool)> = Vec::new();
    let (mut yes, mut no) = (0, 0);
    let mut attempts = 0;
    while yes < 25 || no < 25 {
        attempts += 1;
        check(attempts < 2000, || format!("found {yes} yes and {no} no instances"))?;
        let x = rng.next_bits(8);
        let r = match rng.below(4) {
            0 => x.clone(),
            1 => {
                let mut r = x.clone();
                let i = rng.below(8) as usize;
                r.set(i, !r.bit(i));
                r
            }
            _ => rng.next_bits(8),
        };
        let membership = problem.yes_oracle(&x, &r).map_err(err)?.membership;
        match membership {
            Membership::Yes if yes < 25 => yes += 1,
            Membership::No if no < 25 => no += 1,
            _ => continue,
        }
        instances.push((x, r, membership == Membership::Yes));
    }
    let mut worst = 100;
    for (i, (x, r, expected)) in instances.iter().enumerate() {
        let master = RandomStream::new(10).split(&format!("a10:{i}"));
        let mut agree = 0;
        for rep in 0..100 {
            let mut run_rng = master.split(&format!("rep:{rep}"));
            if problem.verifier(x, r, &mut run_rng).map_err(err)? == *expected {
                agree += 1;
            }
        }
        worst = worst.min(agree);
        check(agree >= 95, || format!("x={x} r={r}: verifier agrees on {agree}/100"))?;
    }
    Ok(format!(
        "{yes} yes + {no} no instances, {} samples per pair, worst agreement {worst}/100",
        problem.sample_count().map_err(err)?
    ))
}

/// A11: the fraction of r that are not yes-witnesses at n = 10.
fn a11() -> Outcome {
    let params = HardnessParams {
        max_desc_bits: 3,
        ..HardnessParams::new(10, 2, 2, 1, 2)
    };
    let problem = HardnessProblem::new(params).map_err(err)?;
    let union = finder_failure_bound(problem.pair_count() as u64, 10, 1, 2).map_err(err)?;
    let bound = bad_set_bound(10, 1, 2).map_err(err)?;
    let mut rng = RandomStream::new(11).split("a11");
    let mut worst = BigRational::zero();
    for x in [BitString::zeros(10), rng.next_bits(10), rng.next_bits(10)] {
        let classes = problem.classify_all(&x).map_err(err)?;
        let failing = classes.iter().filter(|&&c| c != Membership::Yes).count();
        let fraction = BigRational::new(BigInt::from(failing), BigInt::from(1 << 10));
        check(fraction < q(1, 3), || format!("x={x}: failing fraction {fraction}"))?;
        check(fraction <= union, || format!("x={x}: {fraction} above the union bound {union}"))?;
        if fraction > worst {
            worst = fraction;
        }
    }
    // n^2 * n * 2^(n (H(dist/n) - 1) + ell), for reference.
    let n = 10f64;
    let h = binary_entropy(2.0 / n).map_err(err)?;
    let entropy_form = n * n * n * 2f64.powf(n * (h - 1.0) + 1.0);
    Ok(format!(
        "largest failing fraction {worst} < 1/3; union bound {} pairs x {bound} / 2^10 = {union}; entropy form {entropy_form:.1}",
        problem.pair_count()
    ))
}

/// A12: every CLI report is byte-identical across two runs.
fn a12() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_nwlab");
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let dir = std::env::temp_dir().join(format!("nwlab-a12-{}", std::process::id()));
    fs::create_dir_all(&dir).map_err(err)?;
    let f = |name: &str| fixtures.join(name).to_string_lossy().into_owned();
    let runs: Vec<(&str, Vec<String>)> = vec![
        ("design-gen-greedy", vec!["design".into(), "gen".into(), "--config".into(), f("design_gen_greedy.json")]),
        ("design-gen-km", vec!["design".into(), "gen".into(), "--config".into(), f("design_gen_km.json")]),
        ("design-gen-poly", vec!["design".into(), "gen".into(), "--config".into(), f("design_gen_poly.json")]),
        ("design-verify", vec!["design".into(), "verify".into(), "--config".into(), f("design_valid.json")]),
        ("prg-params", vec!["prg".into(), "params".into(), "--config".into(), f("prg_params.json")]),
        ("prg-expand", vec!["prg".into(), "expand".into(), "--config".into(), f("prg_expand.json")]),
        ("prg-enumerate", vec!["prg".into(), "enumerate".into(), "--config".into(), f("prg_enumerate.json")]),
        ("attack-advantage", vec!["attack".into(), "advantage".into(), "--config".into(), f("attack_sampled.json"), "--seed".into(), "5".into()]),
        ("attack-leak", vec!["attack".into(), "leak".into(), "--config".into(), f("attack_census.json"), "--seed".into(), "5".into()]),
        ("attack-census", vec!["attack".into(), "census".into(), "--config".into(), f("attack_census.json")]),
        ("lemma-ball", vec!["lemma".into(), "ball".into(), "--config".into(), f("lemma_ball.json")]),
        ("lemma-badset", vec!["lemma".into(), "badset".into(), "--config".into(), f("lemma_badset.json")]),
        ("lemma-census", vec!["lemma".into(), "census".into(), "--config".into(), f("lemma_census.json")]),
        ("hardness-oracle", vec!["hardness".into(), "oracle".into(), "--config".into(), f("hardness.json")]),
        ("hardness-verify", vec!["hardness".into(), "verify".into(), "--config".into(), f("hardness.json"), "--seed".into(), "5".into()]),
        ("hardness-find", vec!["hardness".into(), "find".into(), "--config".into(), f("hardness.json"), "--seed".into(), "5".into()]),
        ("derand-decision", vec!["derand".into(), "decision".into(), "--config".into(), f("derand_decision.json")]),
        ("derand-search", vec!["derand".into(), "search".into(), "--config".into(), f("derand_search.json")]),
        ("vm-run", vec!["vm".into(), "run".into(), "--config".into(), f("vm_random.json"), "--seed".into(), "5".into()]),
        ("vm-enumerate", vec!["vm".into(), "enumerate".into(), "--config".into(), f("vm_enumerate.json")]),
    ];
    for (name, args) in &runs {
        let mut reports = Vec::new();
        for attempt in 0..2 {
            let out = dir.join(format!("{name}-{attempt}.out"));
            let status = Command::new(bin)
                .args(args)
                .arg("--out")
                .arg(&out)
                .status()
                .map_err(err)?;
            check(status.success(), || format!("{name} exited with {status}"))?;
            reports.push(fs::read(&out).map_err(err)?);
        }
        check(reports[0] == reports[1], || format!("{name}: reports differ"))?;
    }
    fs::remove_dir_all(&dir).map_err(err)?;
    Ok(format!("{} subcommand reports byte-identical across runs", runs.len()))
}

type Criterion = (&'static str, &'static str, fn() -> Outcome, Duration);

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("A1", "design validity", a1, Duration::from_secs(10)),
        ("A2", "padding round trip", a2, Duration::from_secs(5)),
        ("A3", "hybrid telescoping", a3, Duration::from_secs(30)),
        ("A4", "predictor census", a4, Duration::from_secs(300)),
        ("A5", "leakage-length identity", a5, Duration::from_secs(1)),
        ("A6", "bad-set counting", a6, Duration::from_secs(600)),
        ("A7", "entropy bound", a7, Duration::from_secs(1)),
        ("A8", "decision derandomizer", a8, Duration::from_secs(120)),
        ("A9", "search derandomizer", a9, Duration::from_secs(120)),
        ("A10", "hardness verifier vs exact oracle", a10, Duration::from_secs(600)),
        ("A11", "finder failure census", a11, Duration::from_secs(600)),
        ("A12", "CLI reproducibility", a12, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (id, title, run, budget) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let result = match outcome {
            Ok(detail) if elapsed <= budget => Ok(detail),
            Ok(detail) => Err(format!("{detail}; over the {}s budget", budget.as_secs())),
            Err(e) => Err(e),
        };
        match result {
            Ok(detail) => println!("{id} PASS {title}: {detail} ({:.2}s)", elapsed.as_secs_f64()),
            Err(e) => {
                failed += 1;
                println!("{id} FAIL {title}: {e} ({:.2}s)", elapsed.as_secs_f64());
            }
        }
    }
    if failed == 0 {
        println!("acceptance: 12/12 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of 12 criteria fail");
        ExitCode::FAILURE
    }
}
