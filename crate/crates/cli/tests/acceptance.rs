use std::process::Command;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use permstat::asymptotics::{alpha_limit, decompose, variance_limit};
use permstat::combinatorics::{integer_partitions, CyclePathType, PartialPermutation};
use permstat::expectation::graded_values;
use permstat::indicator::{c_poly, top_degree_violations, Engine};
use permstat::oracle::{self, definitions, for_each_permutation, ClassTable, DEFAULT_MAX_N};
use permstat::poly::{fmt_rational, frac, rat, Naming, Poly};
use permstat::statistic::{
    builtin, moment, parse_statistic, uniform_moment, variance, ConstrainedTranslate, RegularStatistic,
};

type Check = Result<String, String>;
type Criterion = (u32, &'static str, Option<Duration>, fn() -> Check);

/// Marks a failure whose cause is recorded as a defect in the stated claim
/// rather than in this implementation.
const KNOWN: &str = "[documented] ";

fn known(msg: String) -> String {
    format!("{KNOWN}{msg}")
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn run_cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_permstat"))
        .args(args)
        .output()
        .expect("run permstat");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn squash(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

fn first_line(s: &str) -> &str {
    s.lines().next().unwrap_or("")
}

fn partitions_up_to(nmax: u32) -> Vec<Vec<u32>> {
    (1..=nmax).flat_map(integer_partitions).collect()
}

fn grid_types() -> Vec<CyclePathType> {
    (1..=4).flat_map(CyclePathType::all_of_size).collect()
}

fn exc_closed_forms() -> Check {
    let (code, out) = run_cli(&["moment", "exc", "-d", "1"]);
    ensure!(code == 0 && first_line(&out) == "(n - m1) / 2", "mean printed {out:?} (exit {code})");
    let (code, out) = run_cli(&["moment", "exc", "-d", "2", "--variance"]);
    ensure!(
        code == 0 && squash(first_line(&out)) == squash("(n - m1 - 2*m2)/12"),
        "variance printed {out:?} (exit {code})"
    );
    let engine = Engine::default();
    let v = variance(&engine, &builtin("exc").unwrap()).map_err(|e| e.to_string())?;
    let mut cells = 0;
    for n in 1..=7 {
        let table = ClassTable::new(n, DEFAULT_MAX_N).unwrap();
        for (lambda, _) in table.classes() {
            let brute = table.class_moments(lambda, 2, definitions::exc).unwrap();
            let mean = v.first.evaluate_at(lambda).unwrap();
            let var = v.variance.evaluate_at(lambda).unwrap();
            ensure!(mean == brute[0], "mean at {lambda:?}: {mean} vs oracle {}", brute[0]);
            let brute_var = &brute[1] - &brute[0] * &brute[0];
            ensure!(var == brute_var, "variance at {lambda:?}: {var} vs oracle {brute_var}");
            cells += 1;
        }
    }
    Ok(format!("both closed forms printed exactly; mean and variance match the oracle on {cells} classes"))
}

fn injection_grid() -> Check {
    let engine = Engine::default();
    let types = grid_types();
    let lambdas = partitions_up_to(7);
    let mut cells = 0;
    for t in &types {
        let f = engine.indicator_moment(t).map_err(|e| e.to_string())?;
        ensure!(f.poly.graded_degree() == Some(t.size() as u32), "{t} has graded degree {:?}", f.poly.graded_degree());
        let p = t.representative();
        for lambda in &lambdas {
            let brute = oracle::injection_count(&p, lambda, DEFAULT_MAX_N).unwrap();
            let got = f.poly.eval(&graded_values(lambda, 2 * t.size() + 2));
            ensure!(got == rat(brute as i64), "{t} at {lambda:?}: {got} vs oracle {brute}");
            cells += 1;
        }
    }
    Ok(format!("{} nonempty types, {} classes, {cells} exact cells", types.len(), lambdas.len()))
}

fn component_grid() -> Check {
    let types = grid_types();
    let lambdas = partitions_up_to(7);
    let mut cells = 0;
    for t in &types {
        let c = c_poly(t);
        let p = t.representative();
        for lambda in &lambdas {
            let brute = oracle::compatible_function_count(&p, lambda, DEFAULT_MAX_N).unwrap();
            let got = c.eval(&graded_values(lambda, 2 * t.size() + 2));
            ensure!(got == rat(brute as i64), "{t} at {lambda:?}: {got} vs oracle {brute}");
            cells += 1;
        }
    }
    Ok(format!("{cells} exact cells"))
}

fn maj_consistency() -> Check {
    let maj = builtin("maj").unwrap();
    ensure!(maj.num_terms() == 8, "maj has {} translates", maj.num_terms());
    let mut checks = 0;
    let mut bad = None;
    for_each_permutation(6, |pi| {
        checks += 1;
        if bad.is_none() && maj.evaluate(pi) != definitions::maj(pi) {
            bad = Some(pi.to_vec());
        }
    });
    ensure!(bad.is_none(), "expansion differs from maj at {:?}", bad.unwrap());
    let (code, out) = run_cli(&["verify", "maj", "--nmax", "6", "-d", "2"]);
    ensure!(code == 0, "verify maj exited {code}: {}", out.lines().last().unwrap_or(""));
    let m = uniform_moment(&maj, 1).map_err(|e| e.to_string())?;
    for n in 1..=6u32 {
        let expected = frac(n as i64 * (n as i64 - 1), 4);
        let brute = oracle::uniform_moment(definitions::maj, n, 1, DEFAULT_MAX_N).unwrap();
        let got = m.evaluate_uniform(n).unwrap();
        ensure!(got == expected && brute == expected, "n={n}: engine {got}, oracle {brute}, n(n-1)/4 = {expected}");
    }
    Ok(format!("{checks} pointwise checks; verify passed ({}); uniform mean n(n-1)/4 for n <= 6", first_line(out.lines().last().unwrap_or(""))))
}

fn random_translate(rng: &mut StdRng) -> ConstrainedTranslate {
    let k = rng.gen_range(1..=3);
    let mut pos = [1u32, 2, 3];
    let mut val = [1u32, 2, 3];
    pos.shuffle(rng);
    val.shuffle(rng);
    let (packed, _) = PartialPermutation::new(pos[..k].to_vec(), val[..k].to_vec())
        .unwrap()
        .canonicalize();
    let m = packed.support_size();
    let constraints: Vec<u32> = (1..m as u32).filter(|_| rng.gen_bool(0.5)).collect();
    let c = *[-2i64, -1, 1, 2, 3].choose(rng).unwrap();
    let w = rng.gen_range(0..=m);
    let weight = if w == 0 { Poly::int(c) } else { Poly::var(w - 1).scale(&rat(c)) };
    ConstrainedTranslate::new(packed, constraints, weight).unwrap()
}

fn product_soundness() -> Check {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut checks = 0;
    let mut power_breaks = Vec::new();
    for _ in 0..50 {
        let a = RegularStatistic::from_translate(random_translate(&mut rng));
        let b = RegularStatistic::from_translate(random_translate(&mut rng));
        let prod = a.mul(&b);
        let mut bad = None;
        for_each_permutation(5, |pi| {
            checks += 1;
            if bad.is_none() && prod.evaluate(pi) != a.evaluate(pi) * b.evaluate(pi) {
                bad = Some(pi.to_vec());
            }
        });
        ensure!(bad.is_none(), "({a}) * ({b}) wrong at {:?}", bad.unwrap());
        ensure!(
            prod.size() <= a.size() + b.size() && prod.shift() <= a.shift() + b.shift(),
            "({a}) * ({b}) breaks size or shift subadditivity"
        );
        let budget = a.power() + a.shift() + b.power() + b.shift();
        ensure!(
            prod.translates().all(|t| t.power() + t.shift() <= budget),
            "({a}) * ({b}) has a translate with power + shift above {budget}"
        );
        if prod.power() > a.power() + b.power() {
            let worst = prod.translates().max_by_key(|t| t.power()).unwrap();
            power_breaks.push(format!(
                "({a}) * ({b}) has power {} > {} + {} via {worst}",
                prod.power(),
                a.power(),
                b.power()
            ));
        }
    }
    let summary = format!("50 pairs, {checks} pointwise checks exact; size and shift subadditive, every product translate within the power + shift budget");
    if power_breaks.is_empty() {
        Ok(format!("{summary}; power subadditive"))
    } else {
        Err(known(format!(
            "{summary}; power subadditivity fails for {} pairs (the factors share an adjacency constraint without sharing an edge), e.g. {}",
            power_breaks.len(),
            power_breaks[0]
        )))
    }
}

const GRID_STATISTICS: [&str; 14] = [
    "exc", "des", "maj", "inv", "fix", "cyc2", "N(12)", "N(21)", "N(123)", "N(132)", "N(213)", "N(231)", "N(312)",
    "N(321)",
];

fn degree_bounds() -> Check {
    let engine = Engine::default();
    let mut count = 0;
    for src in GRID_STATISTICS {
        let psi = parse_statistic(src).unwrap();
        let top = match src {
            "exc" | "fix" | "cyc2" => 3,
            _ if psi.size() <= 2 => 2,
            _ => 1,
        };
        for d in 1..=top {
            for m in [moment(&engine, &psi, d), uniform_moment(&psi, d)] {
                let m = m.map_err(|e| format!("{src} d={d}: {e}"))?;
                ensure!(m.degree.is_none_or(|deg| deg <= m.bound), "{src} d={d} degree {:?} > {}", m.degree, m.bound);
                count += 1;
            }
        }
    }
    for src in ["exc", "des", "maj"] {
        let (code, _) = run_cli(&["moment", src, "-d", "2"]);
        ensure!(code == 0, "moment {src} -d 2 exited {code}");
    }
    Ok(format!("{count} class and uniform moments within dp + dq; no exit code 4 from the CLI"))
}

fn monomial_scan() -> Check {
    let engine = Engine::default();
    let types = grid_types();
    for t in &types {
        let f = engine.indicator_moment(t).map_err(|e| e.to_string())?;
        let bad = top_degree_violations(t, &f.poly);
        ensure!(bad.is_empty(), "{t}: top-degree monomials {bad:?} fail the scan");
    }
    Ok(format!("{} types scanned", types.len()))
}

fn variance_structure() -> Check {
    let engine = Engine::default();
    let mut notes = Vec::new();
    for src in ["exc", "des", "N(12)", "N(21)"] {
        let psi = parse_statistic(src).unwrap();
        let p = psi.power() as u32;
        let v = variance(&engine, &psi).map_err(|e| e.to_string())?.variance;
        let d = decompose(&v, 2 * p as i64, 1).map_err(|e| format!("{src}: {e}"))?;
        let coef = d.leading().coefficient(&[2 * p]);
        ensure!(coef == rat(0), "{src}: y1^{} coefficient of the top layer is {coef}", 2 * p);
        let lim = variance_limit(&engine, &psi).map_err(|e| format!("{src}: {e}"))?;
        notes.push(format!("{src}: V1 = {}, V2 = {}", lim.v1.display(Naming::Limit), lim.v2.display(Naming::Limit)));
        if src == "exc" {
            let alpha = Poly::var(0);
            ensure!(lim.v1 == (&Poly::one() - &alpha).scale(&frac(1, 12)), "exc V1 = {}", lim.v1.display(Naming::Limit));
            ensure!(
                lim.v2 == Poly::constant(frac(1, 6)) || lim.v2 == Poly::constant(frac(-1, 6)),
                "exc V2 = {}",
                lim.v2.display(Naming::Limit)
            );
            // Raising m2 at fixed n and m1 moves the variance by n * beta * V2.
            let var = |l: &[u32]| {
                let t = ClassTable::new(l.iter().sum(), DEFAULT_MAX_N).unwrap();
                let b = t.class_moments(l, 2, definitions::exc).unwrap();
                &b[1] - &b[0] * &b[0]
            };
            let shift = var(&[2, 2, 2, 2]) - var(&[8]);
            let v2 = lim.v2.constant_term();
            ensure!(
                (shift < rat(0)) == (v2 < rat(0)),
                "oracle variance shift {shift} disagrees in sign with V2 = {v2}"
            );
        }
    }
    Ok(notes.join("; "))
}

fn long_cycles() -> Check {
    let engine = Engine::default();
    let exc = moment(&engine, &builtin("exc").unwrap(), 2).map_err(|e| e.to_string())?;
    let (a, b) = (exc.evaluate_at(&[7]).unwrap(), exc.evaluate_at(&[4, 3]).unwrap());
    ensure!(a == b, "exc d=2: {a} at (7), {b} at (4,3)");
    // des is built from size-2 indicators, so d = 2 needs cycles longer than 4.
    let des = moment(&engine, &builtin("des").unwrap(), 2).map_err(|e| e.to_string())?;
    for (l1, l2) in [(vec![10], vec![5, 5]), (vec![11], vec![6, 5]), (vec![12], vec![7, 5])] {
        let (x, y) = (des.evaluate_at(&l1).unwrap(), des.evaluate_at(&l2).unwrap());
        ensure!(x == y, "des d=2: {x} at {l1:?}, {y} at {l2:?}");
    }
    let table = ClassTable::new(7, DEFAULT_MAX_N).unwrap();
    let mut outside = Vec::new();
    for l in [[7].as_slice(), &[4, 3]] {
        let brute = table.class_moments(l, 2, definitions::des).unwrap();
        let got = des.evaluate_at(l).unwrap();
        ensure!(got == brute[1], "des d=2 at {l:?}: {got} vs oracle {}", brute[1]);
        outside.push(fmt_rational(&got));
    }
    Ok(format!(
        "exc equal at (7),(4,3); des equal at (10),(5,5) / (11),(6,5) / (12),(7,5); des at (7),(4,3) is {} vs {} (oracle-confirmed; (4,3) has cycles of length <= kd = 4)",
        outside[0], outside[1]
    ))
}

fn quasirandom() -> Check {
    let engine = Engine::default();
    let zero = BigRational::from_integer(0.into());
    let at0 = alpha_limit(&engine, &parse_statistic("N(12)").unwrap()).map_err(|e| e.to_string())?.at(&zero);
    ensure!(at0 == frac(1, 4), "N(12) gives {at0} at alpha = 0");
    for sigma in ["123", "132", "213", "231", "312", "321"] {
        let psi = parse_statistic(&format!("N({sigma})")).unwrap();
        let v = alpha_limit(&engine, &psi).map_err(|e| e.to_string())?.at(&zero);
        ensure!(v == frac(1, 36), "N({sigma}) gives {v} at alpha = 0");
        let digits: Vec<u32> = sigma.chars().map(|c| c.to_digit(10).unwrap()).collect();
        let m = uniform_moment(&psi, 1).map_err(|e| e.to_string())?;
        for n in 1..=6i64 {
            let expected = (0..3).fold(rat(1), |acc, i| acc * frac(n - i, i + 1)) / rat(6);
            let brute = oracle::uniform_moment(|p| definitions::pattern_count(&digits, p), n as u32, 1, DEFAULT_MAX_N).unwrap();
            let got = m.evaluate_uniform(n as u32).unwrap();
            ensure!(brute == expected && got == expected, "N({sigma}) n={n}: engine {got}, oracle {brute}");
        }
    }
    Ok("N(12) -> 1/4, N(sigma) -> 1/36 for all sigma in S_3; binom(n,k)/k! confirmed for n <= 6".into())
}

fn bivincular_des() -> Check {
    let biv = parse_statistic("biv(21;A={1})").map_err(|e| e.to_string())?;
    ensure!(biv == builtin("des").unwrap(), "biv(21;A={{1}}) differs from des");
    let mut bad = None;
    for_each_permutation(6, |pi| {
        if bad.is_none() && biv.evaluate(pi) != definitions::des(pi) {
            bad = Some(pi.to_vec());
        }
    });
    ensure!(bad.is_none(), "descent count differs at {:?}", bad.unwrap());
    let engine = Engine::default();
    let m = moment(&engine, &biv, 1).map_err(|e| e.to_string())?;
    let mut classes = 0;
    for n in 1..=7 {
        let table = ClassTable::new(n, DEFAULT_MAX_N).unwrap();
        for (lambda, _) in table.classes() {
            let brute = table.class_moments(lambda, 1, definitions::des).unwrap();
            let got = m.evaluate_at(lambda).unwrap();
            ensure!(got == brute[0], "{lambda:?}: {got} vs oracle {}", brute[0]);
            classes += 1;
        }
    }
    Ok(format!("720 pointwise checks; class means match on {classes} classes"))
}

fn main() {
    let criteria: [Criterion; 11] = [
        (1, "exc closed forms", Some(Duration::from_secs(10)), exc_closed_forms),
        (2, "indicator polynomials vs injection counts", Some(Duration::from_secs(120)), injection_grid),
        (3, "c_poly vs compatible function counts", None, component_grid),
        (4, "maj expansion and uniform mean", None, maj_consistency),
        (5, "product soundness", None, product_soundness),
        (6, "degree bounds", None, degree_bounds),
        (7, "top-degree monomial scan", None, monomial_scan),
        (8, "variance limit structure", Some(Duration::from_secs(60)), variance_structure),
        (9, "long-cycle moments", None, long_cycles),
        (10, "quasirandom normalization", None, quasirandom),
        (11, "bivincular descents", None, bivincular_des),
    ];
    let mut failed = 0;
    let mut documented = 0;
    for (id, name, limit, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let over = limit.is_some_and(|l| elapsed > l);
        let limit_text = limit.map_or(String::new(), |l| format!(", limit {}s", l.as_secs()));
        let (pass, detail) = match (outcome, over) {
            (Ok(d), false) => (true, d),
            (Ok(d), true) => (false, format!("too slow; {d}")),
            (Err(e), _) => (false, e),
        };
        if !pass {
            if detail.starts_with(KNOWN) {
                documented += 1;
            } else {
                failed += 1;
            }
        }
        let status = if pass { "PASS" } else { "FAIL" };
        println!("{status} {id:>2} {name} [{:.2}s{limit_text}, tolerance 0]: {detail}", elapsed.as_secs_f64());
    }
    println!(
        "{} of 11 criteria passed; {documented} documented failure(s), {failed} unexpected failure(s)",
        11 - failed - documented
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
