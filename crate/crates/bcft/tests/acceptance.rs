//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use bcft::braids::{cable_compose, BraidWord};
use bcft::coords::CoordSystem;
use bcft::latticecft::{
    bootstrap_check, build_boundary, colored, expansion_consistency_check, ker_t_check, sample_bulk_points,
    sample_open_points, single_valuedness_check, skew_symmetry_check, Charge, Charges, NarainModel, OpenPoint,
    SampleSpec,
};
use bcft::series::{
    evaluate_closed, expand_in, exponent_f64, parse_exponent, rat, BranchPlan, PowerProduct,
};
use bcft::trees::{
    all_closed, all_open_trees, all_shapes, all_trees, parse_colored, parse_tree, random_tree, ColoredTree,
    DoubledLabel, ParsedTree, Tree,
};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    detail: String,
    budget: Option<Duration>,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail, budget: None }
}

fn within(mut o: Outcome, secs: u64) -> Outcome {
    o.budget = Some(Duration::from_secs(secs));
    o
}

// 1. Operad laws.

fn block(g: &[u32], p: u32, m: u32) -> Vec<u32> {
    let gp = g[p as usize - 1];
    let shift = |x: u32| if x > gp { x + m - 1 } else { x };
    let n = g.len() as u32;
    (1..=n + m - 1)
        .map(|i| {
            if i < p {
                shift(g[i as usize - 1])
            } else if i < p + m {
                gp + (i - p)
            } else {
                shift(g[(i - m + 1) as usize - 1])
            }
        })
        .collect()
}

fn inner_block(n: u32, p: u32, t: &[u32]) -> Vec<u32> {
    let m = t.len() as u32;
    (1..=n + m - 1).map(|i| if i < p || i >= p + m { i } else { p + t[(i - p) as usize] - 1 }).collect()
}

fn random_perm(rng: &mut ChaCha8Rng, n: usize) -> Vec<u32> {
    let mut v: Vec<u32> = (1..=n as u32).collect();
    for i in (1..n).rev() {
        v.swap(i, rng.random_range(0..=i));
    }
    v
}

fn laws(a: &Tree, b: &Tree, c: &Tree, g: &[u32], t: &[u32]) -> bool {
    let unit = Tree::Leaf(1);
    let (n, m, k) = (a.size() as u32, b.size() as u32, c.size() as u32);
    let mut ok = unit.compose(1, a).unwrap() == *a;
    for p in 1..=n {
        ok &= a.compose(p, &unit).unwrap() == *a;
        let ab = a.compose(p, b).unwrap();
        for q in 1..=n + m - 1 {
            let lhs = ab.compose(q, c).unwrap();
            let rhs = if q < p {
                a.compose(q, c).unwrap().compose(p + k - 1, b).unwrap()
            } else if q < p + m {
                a.compose(p, &b.compose(q - p + 1, c).unwrap()).unwrap()
            } else {
                a.compose(q - m + 1, c).unwrap().compose(p, b).unwrap()
            };
            ok &= lhs == rhs;
        }
        let gp = g[p as usize - 1];
        ok &= a.permute(g).unwrap().compose(gp, b).unwrap() == ab.permute(&block(g, p, m)).unwrap();
        ok &= a.compose(p, &b.permute(t).unwrap()).unwrap() == ab.permute(&inner_block(n, p, t)).unwrap();
    }
    ok
}

fn criterion_1() -> Outcome {
    let mut small: Vec<Tree> = Vec::new();
    for r in 1..=3 {
        small.extend(all_trees(r));
    }
    let mut ok = all_trees(3).len() == 12 && all_shapes(4).len() == 5;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut cases = 0;
    for a in &small {
        for b in &small {
            for c in &small {
                let g = random_perm(&mut rng, a.size());
                let t = random_perm(&mut rng, b.size());
                ok &= laws(a, b, c, &g, &t);
                cases += 1;
            }
        }
    }
    for _ in 0..500 {
        let pick = |rng: &mut ChaCha8Rng| {
            let r = rng.random_range(1..=6);
            random_tree(rng, r)
        };
        let (a, b, c) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        let g = random_perm(&mut rng, a.size());
        let t = random_perm(&mut rng, b.size());
        ok &= laws(&a, &b, &c, &g, &t);
    }
    within(outcome(ok, format!("{cases} exhaustive triples over trees with at most 3 leaves, 500 random with r <= 6")), 5)
}

// 2. Coordinate round trip.

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for _ in 0..50 {
        let r = rng.random_range(2..=7);
        let cs = CoordSystem::new(&random_tree(&mut rng, r)).unwrap();
        for _ in 0..20 {
            let p: Vec<C64> = (0..r).map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
            let back = cs.inverse(&cs.psi(&p).unwrap());
            let scale = p.iter().map(|z| z.norm()).fold(1.0, f64::max);
            worst = worst.max(back.iter().zip(&p).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) / scale);
            count += 1;
        }
    }
    within(outcome(worst <= 1e-12, format!("{count} points, max error {worst:.2e}")), 5)
}

// 3. Worked expansion against the truncated geometric series.

type Poly = BTreeMap<Vec<u32>, f64>;

fn poly_mul(a: &Poly, b: &Poly, max_deg: u32) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            if e.iter().sum::<u32>() <= max_deg {
                *out.entry(e).or_insert(0.0) += ca * cb;
            }
        }
    }
    out
}

fn criterion_3() -> Outcome {
    let n = 6;
    let a = parse_tree("(23)((15)4)").unwrap();
    let cs = CoordSystem::new(&a).unwrap();
    let s = expand_in(&cs, &"(z2-z1)^-1".parse_power_product(), n).unwrap();
    let names = cs.var_names();
    let idx = |name: &str| names.iter().position(|x| x == name).unwrap() - 2;
    let (za, zb, zc) = (idx("zeta2"), idx("zeta1"), idx("zeta5"));
    let ne = names.len() - 2;
    let mono = |ks: &[usize]| {
        let mut e = vec![0u32; ne];
        for &k in ks {
            e[k] += 1;
        }
        e
    };
    let p: Poly = [(mono(&[za]), -1.0), (mono(&[zc]), 1.0), (mono(&[zb, zc]), 1.0)].into_iter().collect();
    let mut oracle: Poly = [(vec![0; ne], 1.0)].into_iter().collect();
    let mut power = oracle.clone();
    for _ in 1..=n {
        power = poly_mul(&power, &p, n);
        for (e, c) in &power {
            *oracle.entry(e.clone()).or_insert(0.0) += c;
        }
    }
    oracle.retain(|_, c| *c != 0.0);
    let mut ok = true;
    let mut worst: f64 = 0.0;
    let mut found = 0;
    for t in s.terms() {
        ok &= t.exponents[0] == rat(-1, 1) && t.exponents[1] == rat(0, 1);
        ok &= t.exponents[2..].iter().all(|e| e.is_integer()) && t.coeff.im == 0.0;
        let e: Vec<u32> = t.exponents[2..].iter().map(|e| exponent_f64(e) as u32).collect();
        let want = oracle.get(&e).copied().unwrap_or(0.0);
        worst = worst.max((t.coeff.re - want).abs());
        found += 1;
    }
    ok &= found == oracle.len() && worst <= 1e-14;
    outcome(ok, format!("N = {n}: {found} terms against {} oracle terms, max coefficient error {worst:.1e}", oracle.len()))
}

trait ParsePp {
    fn parse_power_product(&self) -> PowerProduct;
}

impl ParsePp for str {
    fn parse_power_product(&self) -> PowerProduct {
        bcft::series::parse_power_product(self).unwrap()
    }
}

// 4. Region agreement.

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let comb = CoordSystem::new(&parse_tree("1(2(3(45)))").unwrap()).unwrap();
    let mut disagree = 0;
    let mut inside = 0;
    for k in 0..1000 {
        let z5 = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let mut radii: Vec<f64> = (0..4).map(|_| rng.random_range(0.05..2.0)).collect();
        if k % 2 == 0 {
            radii.sort_by(|a, b| b.partial_cmp(a).unwrap());
        }
        let p: Vec<C64> = radii
            .iter()
            .map(|&r| z5 + C64::from_polar(r, rng.random_range(-3.1..3.1)))
            .chain(std::iter::once(z5))
            .collect();
        let d = |i: usize| (p[i] - p[4]).norm();
        let chain = d(0) > d(1) && d(1) > d(2) && d(2) > d(3) && d(3) > 0.0;
        let m = comb.region_membership(&p);
        inside += chain as usize;
        disagree += (m.in_ubar != chain) as usize;
    }
    let two = CoordSystem::new(&parse_tree("(1(23))(4(56))").unwrap()).unwrap();
    let mut two_disagree = 0;
    for _ in 0..1000 {
        let z6 = C64::new(0.0, 0.0);
        let z3 = C64::from_polar(1.0, rng.random_range(-3.1..3.1));
        let near = |rng: &mut ChaCha8Rng, c: C64, s: f64| c + C64::from_polar(rng.random_range(0.0..s), rng.random_range(-3.1..3.1));
        let z1 = near(&mut rng, z3, 0.9);
        let z2 = near(&mut rng, z3, 0.9);
        let z4 = near(&mut rng, z6, 0.9);
        let z5 = near(&mut rng, z6, 0.9);
        let p = [z1, z2, z3, z4, z5, z6];
        let n = |i: usize, j: usize| (p[i - 1] - p[j - 1]).norm();
        let closed = n(1, 3) + n(4, 6) < n(3, 6) && n(2, 3) < n(1, 3) && n(5, 6) < n(4, 6);
        two_disagree += (two.region_membership(&p).in_ubar != closed) as usize;
    }
    let ok = disagree == 0 && two_disagree == 0;
    outcome(ok, format!("comb: {disagree} disagreements on 1000 points ({inside} inside); two-comb: {two_disagree} disagreements on 1000 points"))
}

// 5. Convergence.

fn random_product(rng: &mut ChaCha8Rng, a: &Tree) -> PowerProduct {
    let order = a.leaves();
    let mut f = PowerProduct::one();
    for (i, &u) in order.iter().enumerate() {
        for &v in &order[i + 1..] {
            if rng.random_bool(0.8) {
                let q = rng.random_range(1..=4);
                let mut p = rng.random_range(-4..=4);
                if p == 0 {
                    p = 1;
                }
                f.mul_pair(u, v, rat(p, q));
            } else {
                f.mul_pair(v, u, rat(rng.random_range(-2..=2), 1));
            }
        }
    }
    f.mul_power(order[0], rng.random_range(0..=2));
    f
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let spec = SampleSpec { min_sum: 0.4, max_sum: 0.5, max_phase: 0.3 };
    let floor = 1e-13;
    let mut ok = true;
    let mut lines = Vec::new();
    for _ in 0..5 {
        let a = random_tree(&mut rng, 4);
        let f = random_product(&mut rng, &a);
        let cs = CoordSystem::new(&a).unwrap();
        let pts = sample_bulk_points(&a, &mut rng, 10, spec).unwrap();
        let mut errs = Vec::new();
        for n in [10, 20, 40] {
            let s = expand_in(&cs, &f, n).unwrap();
            let mut worst: f64 = 0.0;
            for p in &pts {
                let closed = evaluate_closed(&f, p, &BranchPlan::default()).unwrap();
                let cv = cs.psi(p).unwrap();
                worst = worst.max((s.evaluate(&cv.as_vec()).unwrap() - closed).norm() / closed.norm());
            }
            errs.push(worst);
        }
        let decreasing = errs.windows(2).all(|w| w[1] <= 1.1 * w[0] || w[1] <= floor);
        ok &= errs[2] <= 1e-8 && decreasing;
        lines.push(format!("{:.1e}/{:.1e}/{:.1e}", errs[0], errs[1], errs[2]));
    }
    within(outcome(ok, format!("errors at N = 10/20/40: {}", lines.join(", "))), 60)
}

// 6. Cabling functoriality.

fn words(n: usize, max_len: usize) -> Vec<BraidWord> {
    let gens: Vec<i32> = (1..n as i32).flat_map(|g| [g, -g]).collect();
    let mut out = vec![BraidWord::identity(n)];
    let mut frontier = vec![Vec::<i32>::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for &g in &gens {
                let mut v = w.clone();
                v.push(g);
                out.push(BraidWord::new(n, v.clone()).unwrap());
                next.push(v);
            }
        }
        frontier = next;
    }
    out
}

fn block_substitute(g: &[u32], p: usize, h: &[u32]) -> Vec<u32> {
    let m = h.len() as u32;
    let gp = g[p - 1];
    let shift = |x: u32| if x > gp { x + m - 1 } else { x };
    let mut out = Vec::new();
    for (k, &x) in g.iter().enumerate() {
        if k + 1 == p {
            out.extend(h.iter().map(|&y| gp + y - 1));
        } else {
            out.push(shift(x));
        }
    }
    out
}

fn criterion_6() -> Outcome {
    let mut ok = true;
    let mut count = 0u64;
    let mut pure_pairs = 0u64;
    let ws: Vec<Vec<BraidWord>> = (0..=4).map(|n| if n == 0 { vec![BraidWord::identity(0)] } else { words(n, 4) }).collect();
    for n in 1..=4 {
        for g in &ws[n] {
            let pg = g.permutation();
            for hs in &ws {
                for h in hs {
                    let ph = h.permutation();
                    for p in 1..=n {
                        let w = cable_compose(g, p, h).unwrap();
                        ok &= w.permutation() == block_substitute(&pg, p, &ph);
                        if g.is_pure() && h.is_pure() {
                            ok &= w.is_pure();
                            pure_pairs += 1;
                        }
                        count += 1;
                    }
                }
            }
        }
    }
    within(outcome(ok, format!("{count} cablings, {pure_pairs} pure pairs")), 30)
}

// 7. Doubling functoriality.

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Kind {
    Z(u32),
    ZBar(u32),
    X(u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Sem {
    Leaf(Kind),
    Node(Box<Sem>, Box<Sem>),
}

fn sem_of(t: &Tree, tag: u32, r: u32) -> Sem {
    match t {
        Tree::Leaf(l) => Sem::Leaf(match DoubledLabel::decode(*l, r) {
            DoubledLabel::Z(k) => Kind::Z(tag * 100 + k),
            DoubledLabel::ZBar(k) => Kind::ZBar(tag * 100 + k),
            DoubledLabel::X(k) => Kind::X(tag * 100 + k),
        }),
        Tree::Node(a, b) => Sem::Node(Box::new(sem_of(a, tag, r)), Box::new(sem_of(b, tag, r))),
        Tree::Empty => unreachable!(),
    }
}

fn plain_sem(t: &Tree, tag: u32, bar: bool) -> Sem {
    match t {
        Tree::Leaf(k) => Sem::Leaf(if bar { Kind::ZBar(tag * 100 + k) } else { Kind::Z(tag * 100 + k) }),
        Tree::Node(a, b) => Sem::Node(Box::new(plain_sem(a, tag, bar)), Box::new(plain_sem(b, tag, bar))),
        Tree::Empty => unreachable!(),
    }
}

fn graft(s: &Sem, at: &Kind, with: &Sem) -> Sem {
    match s {
        Sem::Leaf(k) if k == at => with.clone(),
        Sem::Leaf(_) => s.clone(),
        Sem::Node(a, b) => Sem::Node(Box::new(graft(a, at, with)), Box::new(graft(b, at, with))),
    }
}

fn canonical(s: &Sem, names: &mut BTreeMap<u32, u32>) -> Sem {
    let mut name = |k: u32| {
        let next = names.len() as u32 + 1;
        *names.entry(k).or_insert(next)
    };
    match s {
        Sem::Leaf(Kind::Z(k)) => Sem::Leaf(Kind::Z(name(*k))),
        Sem::Leaf(Kind::ZBar(k)) => Sem::Leaf(Kind::ZBar(name(*k))),
        Sem::Leaf(Kind::X(k)) => Sem::Leaf(Kind::X(name(*k))),
        Sem::Node(a, b) => {
            let a = canonical(a, names);
            Sem::Node(Box::new(a), Box::new(canonical(b, names)))
        }
    }
}

fn canon(s: &Sem) -> Sem {
    canonical(s, &mut BTreeMap::new())
}

fn criterion_7() -> Outcome {
    let mut ok = true;
    let mut count = 0;
    let mut open: Vec<ColoredTree> = Vec::new();
    for total in 1..=4 {
        for r in 0..=total {
            open.extend(all_open_trees(r, total - r));
        }
    }
    let mut closed: Vec<ColoredTree> = Vec::new();
    for r in 1..=4u32 {
        closed.extend(all_closed(&(1..=r).collect::<Vec<_>>()));
    }
    for e in &open {
        let (r, s) = e.rs();
        let de = sem_of(&e.doubling().unwrap(), 1, r as u32);
        for f in open.iter().chain(&closed) {
            let (fr, fs) = f.rs();
            if r + s + fr + fs - 1 > 4 {
                continue;
            }
            let f_open = fs > 0 || matches!(f, ColoredTree::Tau(_)) || !matches!(f.color(), Ok(bcft::trees::Color::Closed));
            let slots: Vec<u32> = if f_open { (r as u32 + 1..=(r + s) as u32).collect() } else { (1..=r as u32).collect() };
            for p in slots {
                let Ok(comp) = e.compose(p, f) else {
                    ok = false;
                    continue;
                };
                let (cr, _) = comp.rs();
                let lhs = canon(&sem_of(&comp.doubling().unwrap(), 1, cr as u32));
                let rhs = if f_open {
                    let df = sem_of(&f.doubling().unwrap(), 2, fr as u32);
                    graft(&de, &Kind::X(100 + p), &df)
                } else {
                    let plain = f.closed_to_plain().unwrap();
                    let g = graft(&de, &Kind::Z(100 + p), &plain_sem(&plain, 2, false));
                    graft(&g, &Kind::ZBar(100 + p), &plain_sem(&plain, 2, true))
                };
                ok &= lhs == canon(&rhs);
                count += 1;
            }
        }
    }
    outcome(ok, format!("{count} compositions with r + s <= 4"))
}

// 8. Bootstrap cocycles.

fn criterion_8() -> Outcome {
    let model = NarainModel::new(rat(2, 1)).unwrap();
    let mut ok = true;
    let mut notes = Vec::new();
    for rho in [1, -1] {
        let bd = build_boundary(&model, rho).unwrap();
        let rep = bootstrap_check(&bd, 5);
        let ker = ker_t_check(&bd, 5);
        let bad = bootstrap_check(&bd.with_sigma_at((1, 0), -bd.sigma((1, 0))), 5);
        ok &= rep.passed && ker.passed && !bad.passed;
        notes.push(format!("rho {rho:+}: max {:.1e}, perturbed {}", rep.max_error, if bad.passed { "passes" } else { "fails" }));
    }
    within(outcome(ok, notes.join("; ")), 5)
}

// 9. Boundary consistency.

fn box_charges(b: i64) -> Vec<Charge> {
    (-b..=b).flat_map(|n| (-b..=b).map(move |m| (n, m))).collect()
}

fn open_samples(trees: &[ColoredTree], rng: &mut ChaCha8Rng, count: usize) -> Vec<Vec<OpenPoint>> {
    trees.iter().map(|t| sample_open_points(t, rng, count, SampleSpec::default()).unwrap()).collect()
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let t11 = vec![parse_colored("t(c1) o2").unwrap(), parse_colored("o2 t(c1)").unwrap()];
    let t20 = all_open_trees(2, 0);
    let (p11, p20) = (colored(&t11), colored(&t20));
    let mut ok = t20.len() == 4;
    let mut worst: f64 = 0.0;
    let mut runs = 0;
    let mut failures = Vec::new();
    for r2 in ["1/2", "2", "3"] {
        let model = NarainModel::new(parse_exponent(r2).unwrap()).unwrap();
        for rho in [1, -1] {
            let bd = build_boundary(&model, rho).unwrap();
            let s11 = open_samples(&t11, &mut rng, 20);
            let s20 = open_samples(&t20, &mut rng, 20);
            for &a in &box_charges(2) {
                for &b in &box_charges(2) {
                    for (ch, trees, samples) in [
                        (Charges::new(vec![a], vec![b]), &p11, &s11),
                        (Charges::new(vec![a, b], vec![]), &p20, &s20),
                    ] {
                        let rep = expansion_consistency_check(&bd, &ch, trees, samples, 30, 1e-6).unwrap();
                        runs += 1;
                        worst = worst.max(rep.max_error);
                        let has_phase = rep.extra.contains_key("region_phase");
                        if !rep.passed || !has_phase {
                            ok = false;
                            if failures.len() < 3 {
                                failures.push(format!("R^2={r2} rho={rho} {ch:?}: {:?}", rep.failures));
                            }
                        }
                    }
                }
            }
        }
    }
    let mut detail = format!("{runs} charge configurations, max relative error {worst:.1e}");
    if !failures.is_empty() {
        detail += &format!("; {}", failures.join("; "));
    }
    within(outcome(ok, detail), 120)
}

// 10. Bulk consistency.

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let trees: Vec<Tree> = ["1(2(34))", "(12)(34)", "(1(23))4", "(31)(42)"].iter().map(|s| parse_tree(s).unwrap()).collect();
    let parsed: Vec<ParsedTree> = trees.iter().cloned().map(ParsedTree::Plain).collect();
    let mut ok = true;
    let mut worst: f64 = 0.0;
    let mut loop_worst: f64 = 0.0;
    let charge = |rng: &mut ChaCha8Rng| (rng.random_range(-2..=2), rng.random_range(-2..=2));
    for r2 in [rat(2, 1), rat(3, 2)] {
        let model = NarainModel::new(r2).unwrap();
        let bd = build_boundary(&model, 1).unwrap();
        for _ in 0..3 {
            let ch: Vec<Charge> = (0..4).map(|_| charge(&mut rng)).collect();
            let samples: Vec<Vec<OpenPoint>> = trees
                .iter()
                .map(|t| {
                    sample_bulk_points(t, &mut rng, 20, SampleSpec::default())
                        .unwrap()
                        .into_iter()
                        .map(|bulk| OpenPoint { bulk, boundary: vec![] })
                        .collect()
                })
                .collect();
            let charges = Charges::new(ch.clone(), vec![]);
            let rep = expansion_consistency_check(&bd, &charges, &parsed, &samples, 30, 1e-6).unwrap();
            ok &= rep.passed;
            worst = worst.max(rep.max_error);
            let loops: Vec<Vec<C64>> = samples.iter().map(|s| s[0].bulk.clone()).collect();
            let sv = single_valuedness_check(&model, &ch, &loops, 1e-12).unwrap();
            ok &= sv.passed;
            loop_worst = loop_worst.max(sv.max_error);
        }
    }
    let model = NarainModel::new(rat(2, 1)).unwrap();
    let mut skew_worst: f64 = 0.0;
    for _ in 0..10 {
        let (a, b) = (charge(&mut rng), charge(&mut rng));
        let pts: Vec<(C64, C64)> = (0..10)
            .map(|_| {
                let mut z = || C64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
                (z(), z())
            })
            .collect();
        let rep = skew_symmetry_check(&model, a, b, &pts, 1e-10).unwrap();
        ok &= rep.passed;
        skew_worst = skew_worst.max(rep.max_error);
    }
    outcome(ok, format!("expansions {worst:.1e}, loops {loop_worst:.1e}, skew {skew_worst:.1e}"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("operad laws", criterion_1),
        ("coordinate round trip", criterion_2),
        ("worked expansion", criterion_3),
        ("region agreement", criterion_4),
        ("convergence", criterion_5),
        ("cabling functoriality", criterion_6),
        ("doubling functoriality", criterion_7),
        ("bootstrap cocycles", criterion_8),
        ("boundary consistency", criterion_9),
        ("bulk consistency", criterion_10),
    ];
    let only: Option<usize> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut all = true;
    for (k, (name, f)) in criteria.iter().enumerate() {
        if only.is_some_and(|o| o != k + 1) {
            continue;
        }
        let start = Instant::now();
        let o = f();
        let took = start.elapsed();
        let in_time = o.budget.is_none_or(|b| took <= b);
        let passed = o.passed && in_time;
        all &= passed;
        let budget = o.budget.map(|b| format!(", limit {}s", b.as_secs())).unwrap_or_default();
        println!(
            "criterion {:>2} {:<24} {} ({}; {:.2}s{budget})",
            k + 1,
            name,
            if passed { "PASS" } else { "FAIL" },
            o.detail,
            took.as_secs_f64()
        );
    }
    if !all {
        std::process::exit(1);
    }
}
