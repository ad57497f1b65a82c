//! Recomputes the worked examples and the extremal table and checks them
//! against the quoted values.

use std::fmt;

use num_integer::Integer;
use xyz_lab::arith::{
    canonicalize, factorize, metrics, Factorization, Triple, DEFAULT_TRIAL_BOUND,
};
use xyz_lab::search::{census, extremal_by_smoothness, find_solutions, SearchConfig};

/// Quoted decimals carry rounding in the last printed place and beyond.
pub const QUOTED_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    fn close(&mut self, name: &str, got: f64, quoted: f64) {
        let ok = (got - quoted).abs() <= QUOTED_TOLERANCE;
        self.push(name, ok, format!("{got:.6} vs quoted {quoted}"));
    }

    fn equal<T: PartialEq + fmt::Debug>(&mut self, name: &str, got: T, expected: T) {
        let ok = got == expected;
        self.push(name, ok, format!("{got:?} (expected {expected:?})"));
    }

    fn fail(&mut self, name: &str, err: impl fmt::Display) {
        self.push(name, false, format!("error: {err}"));
    }
}

/// The extremal table: `(S, X, Y, Z, κ₀, Q*)`.
pub const EXTREMAL_TABLE: [(u64, u128, u128, u128, f64, f64); 5] = [
    (3, 1, 8, 9, 1.39560, 1.07480),
    (5, 3, 125, 128, 1.01902, 1.47200),
    (7, 1, 4374, 4375, 0.91517, 1.63904),
    (11, 3584, 14641, 18225, 1.05011, 1.42841),
    (13, 91, 1771470, 1771561, 0.96197, 1.55930),
];

pub const EXTREMAL_HEIGHT: u64 = 2_000_000;
pub const CENSUS_HEIGHT: u64 = 1_000_000_000;
pub const CENSUS_COUNT: u64 = 545;

/// Prime factorization of the order of the Monster group.
const MONSTER_ORDER: [(u128, u32); 15] = [
    (2, 45),
    (3, 20),
    (5, 9),
    (7, 6),
    (11, 2),
    (13, 3),
    (17, 1),
    (19, 1),
    (23, 1),
    (29, 1),
    (31, 1),
    (41, 1),
    (47, 1),
    (59, 1),
    (71, 1),
];

fn divides_monster(f: &Factorization) -> bool {
    f.factors
        .iter()
        .all(|&(p, e)| MONSTER_ORDER.iter().any(|&(q, k)| q == p && e <= k))
}

fn fact_string(n: u128) -> String {
    factorize(n, DEFAULT_TRIAL_BOUND)
        .map(|f| f.to_string())
        .unwrap_or_else(|e| e.to_string())
}

pub fn verify_paper() -> VerifyReport {
    verify_with(true)
}

/// As [`verify_paper`]; `with_census` controls the `H <= 10⁹` census run.
pub fn verify_with(with_census: bool) -> VerifyReport {
    let mut r = VerifyReport::default();
    example_one(&mut r);
    extremal_table(&mut r);
    if with_census {
        census_check(&mut r);
    }
    example_three(&mut r);
    example_four(&mut r);
    example_five(&mut r);
    r
}

fn example_one(r: &mut VerifyReport) {
    match canonicalize(1, 2400, -2401).and_then(|t| Ok((metrics::<f64>(&t)?, t))) {
        Ok((m, t)) => {
            r.equal(
                "example 1 factorization of 2400",
                t.fy.to_string(),
                "2^5·3·5^2".to_string(),
            );
            r.equal(
                "example 1 factorization of 2401",
                t.fz.to_string(),
                "7^4".to_string(),
            );
            r.equal("example 1 height", m.height, 2401);
            r.equal("example 1 smoothness", m.smoothness, 7);
            r.close("example 1 log H", (m.height as f64).ln(), 7.78364);
            r.close("example 1 kappa0", m.kappa0, 0.94829);
            r.close("example 1 qstar", m.qstar, 1.58180);
        }
        Err(e) => r.fail("example 1", e),
    }
}

fn extremal_table(r: &mut VerifyReport) {
    let report = match find_solutions(&SearchConfig::new(EXTREMAL_HEIGHT, 13, true)) {
        Ok(rep) => rep,
        Err(e) => return r.fail("extremal table", e),
    };
    let rows = match extremal_by_smoothness::<f64>(&report) {
        Ok(rows) => rows,
        Err(e) => return r.fail("extremal table", e),
    };
    let found: Vec<(u64, u128, u128, u128)> = rows
        .iter()
        .map(|row| (row.smoothness, row.triple.x, row.triple.y, row.triple.z))
        .collect();
    let expected: Vec<(u64, u128, u128, u128)> = EXTREMAL_TABLE
        .iter()
        .map(|&(s, x, y, z, _, _)| (s, x, y, z))
        .collect();
    r.equal("extremal table rows", found, expected);
    for &(s, x, y, z, k0, q) in &EXTREMAL_TABLE {
        match rows.iter().find(|row| {
            row.smoothness == s && (row.triple.x, row.triple.y, row.triple.z) == (x, y, z)
        }) {
            Some(row) => {
                r.close(&format!("extremal S={s} kappa0"), row.metrics.kappa0, k0);
                r.close(&format!("extremal S={s} qstar"), row.metrics.qstar, q);
            }
            None => r.push(
                format!("extremal S={s}"),
                false,
                format!("({x}, {y}, {z}) not found"),
            ),
        }
    }
}

fn census_check(r: &mut VerifyReport) {
    match find_solutions(&SearchConfig::new(CENSUS_HEIGHT, 13, true)) {
        Ok(report) => {
            let c = census(&report);
            r.push(
                "census of 13-smooth primitive solutions",
                c.unordered == CENSUS_COUNT,
                format!(
                    "1<=X<=Y<Z: {}, 1<=X<Y<Z: {}, ordered: {} (expected {CENSUS_COUNT} for 1<=X<=Y<Z)",
                    c.unordered, c.unordered_distinct, c.ordered
                ),
            );
        }
        Err(e) => r.fail("census", e),
    }
}

fn example_three(r: &mut VerifyReport) {
    // norms of differences of the singular moduli at d = 3, 67, 163
    let d1: i128 = -(1 << 15) * 27 * 125 * 1331;
    let d2: i128 = (1 << 18) * 27 * 125 * 23i128.pow(3) * 29i128.pow(3);
    let d3: i128 = -(1 << 15) * 3i128.pow(7) * 125 * 49 * 13 * 139 * 331;
    r.equal("example 3 differences sum to zero", d1 + d2 + d3, 0);
    let g = d1.gcd(&d2).gcd(&d3);
    r.equal(
        "example 3 reduced triple",
        (d1 / g, d2 / g, d3 / g),
        (-1331, 2_373_927_704, -2_373_926_373),
    );
    r.equal(
        "example 3 triple sum",
        [-1331i128, 2_373_927_704, -2_373_926_373]
            .iter()
            .sum::<i128>(),
        0,
    );
    match canonicalize(-1331, 2_373_927_704, -2_373_926_373)
        .and_then(|t| Ok((metrics::<f64>(&t)?, t)))
    {
        Ok((m, t)) => {
            r.equal(
                "example 3 factorization of 1331",
                t.fx.to_string(),
                "11^3".to_string(),
            );
            r.equal(
                "example 3 factorization of Y",
                fact_string(2_373_927_704),
                "2^3·23^3·29^3".to_string(),
            );
            r.equal(
                "example 3 factorization of Z",
                fact_string(2_373_926_373),
                "3^4·7^2·13·139·331".to_string(),
            );
            r.equal("example 3 primitive", t.primitive, true);
            r.equal("example 3 height", m.height, 2_373_927_704);
            r.equal("example 3 smoothness", m.smoothness, 331);
            r.equal("example 3 radical", m.radical, 184_312_146_018);
            r.close("example 3 kappa0", m.kappa0, 1.88863);
            r.close("example 3 qstar", m.qstar, 0.79422);
        }
        Err(e) => r.fail("example 3", e),
    }
}

fn example_four(r: &mut VerifyReport) {
    let (x, y, z) = (15_312_283u128, 9262u128, 113u128);
    let lhs = x * x + y.pow(3);
    let rhs = z.pow(7);
    r.equal("example 4 x^2 + y^3 = z^7", lhs as i128 - rhs as i128, 0);
    r.equal(
        "example 4 factorization of x",
        fact_string(x),
        "7·53·149·277".to_string(),
    );
    r.equal(
        "example 4 factorization of y",
        fact_string(y),
        "2·11·421".to_string(),
    );
    match Triple::from_sum(x * x, y.pow(3), DEFAULT_TRIAL_BOUND).and_then(|t| metrics::<f64>(&t)) {
        Ok(m) => {
            r.equal("example 4 height", m.height, rhs);
            r.equal("example 4 smoothness", m.smoothness, 421);
            r.close("example 4 kappa0", m.kappa0, 1.72682);
            r.close("example 4 qstar", m.qstar, 0.86864);
        }
        Err(e) => r.fail("example 4", e),
    }
}

fn example_five(r: &mut VerifyReport) {
    let cases: [(u128, &str, u128, &str, f64); 2] = [
        (196_882, "2·7^4·41", 196_883, "47·59·71", 1.70463),
        (
            21_296_875,
            "5^6·29·47",
            21_296_876,
            "2^2·31·41·59·71",
            1.50849,
        ),
    ];
    for (x, fx, z, fz, k0) in cases {
        let name = format!("example 5 ({x}, 1, {z})");
        r.equal(
            &format!("{name} factorization of {x}"),
            fact_string(x),
            fx.to_string(),
        );
        r.equal(
            &format!("{name} factorization of {z}"),
            fact_string(z),
            fz.to_string(),
        );
        match Triple::from_sum(1, x, DEFAULT_TRIAL_BOUND) {
            Ok(t) => {
                let all_divide = [&t.fx, &t.fy, &t.fz].iter().all(|f| divides_monster(f));
                r.push(
                    format!("{name} entries divide the Monster order"),
                    all_divide,
                    format!("{} · {} · {}", t.fx, t.fy, t.fz),
                );
                match metrics::<f64>(&t) {
                    Ok(m) => {
                        r.equal(&format!("{name} smoothness"), m.smoothness, 71);
                        r.close(&format!("{name} kappa0"), m.kappa0, k0);
                    }
                    Err(e) => r.fail(&name, e),
                }
            }
            Err(e) => r.fail(&name, e),
        }
    }
}
