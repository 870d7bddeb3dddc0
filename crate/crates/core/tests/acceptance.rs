//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the process fails if any criterion fails.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use polyspace::apolar::{annihilator_basis, betti_numbers, is_zero_class, pd_class};
use polyspace::chambers::{
    enumerate_chambers, is_generic, segment_crossings, signature, ChamberGraph, IndexSet,
    LengthVector,
};
use polyspace::ratpoly::{rat, MultiIndex, MultiPoly, Rational};
use polyspace::volume::{
    dh_sum, intersection_number, volume_polynomial, volume_value, wall_jump, Convention,
};
use polyspace::wallcross::betti_via_path;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lv(xs: &[(i64, i64)]) -> LengthVector {
    LengthVector::new(xs.iter().map(|&(a, b)| rat(a, b)).collect()).unwrap()
}

fn delta0() -> LengthVector {
    lv(&[(3, 20), (3, 20), (2, 5), (3, 20), (3, 20)])
}

fn delta1() -> LengthVector {
    lv(&[(1, 20), (11, 60), (2, 5), (11, 60), (11, 60)])
}

fn x(n: usize, i: usize) -> MultiPoly {
    MultiPoly::var(n, i)
}

fn perimeter_form(n: usize) -> MultiPoly {
    (0..n).fold(MultiPoly::zero(n), |acc, i| &acc + &x(n, i))
}

fn eps_form(n: usize, mask: u32) -> MultiPoly {
    (0..n).fold(MultiPoly::zero(n), |acc, i| {
        if mask >> i & 1 == 1 {
            &acc + &x(n, i)
        } else {
            &acc - &x(n, i)
        }
    })
}

fn factorial(k: usize) -> BigInt {
    (1..=k).map(BigInt::from).product()
}

/// Sign of `ε_I(r)` computed from scratch.
fn eps_value(r: &[Rational], mask: u32) -> Rational {
    r.iter()
        .enumerate()
        .map(|(i, v)| {
            if mask >> i & 1 == 1 {
                v.clone()
            } else {
                -v.clone()
            }
        })
        .sum()
}

/// The volume sum expanded with polynomial powers, long sets decided from
/// the signs of `ε` at `r`.
fn volume_sum_poly(r: &[Rational]) -> MultiPoly {
    let n = r.len();
    let k = (n - 3) as u32;
    let mut sum = MultiPoly::zero(n);
    for mask in 1u32..(1 << n) {
        if !eps_value(r, mask).is_positive() {
            continue;
        }
        let term = eps_form(n, mask).pow(k);
        sum = if (n - mask.count_ones() as usize).is_multiple_of(2) {
            &sum + &term
        } else {
            &sum - &term
        };
    }
    sum.scale(&Rational::new(BigInt::from(-1), factorial(n - 3) * 2))
}

/// The volume sum evaluated numerically at `r`.
fn volume_sum_value(r: &[Rational]) -> Rational {
    let n = r.len();
    let mut sum = Rational::zero();
    for mask in 1u32..(1 << n) {
        let e = eps_value(r, mask);
        if !e.is_positive() {
            continue;
        }
        let term = num_traits::pow(e, n - 3);
        if (n - mask.count_ones() as usize).is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
    }
    -sum / Rational::from_integer(factorial(n - 3) * 2)
}

fn criterion_1() -> Outcome {
    let a = volume_value(&delta0()).map_err(|e| e.to_string())?;
    let b = volume_value(&delta1()).map_err(|e| e.to_string())?;
    // 2π²(1−2r₃)² and 2r₁(1−r₁−2r₃), divided by 4π²
    let r3 = rat(2, 5);
    let r1 = rat(1, 20);
    let one = Rational::one();
    let slice0 = num_traits::pow(&one - rat(2, 1) * &r3, 2) / rat(2, 1);
    let slice1 = rat(2, 1) * &r1 * (&one - &r1 - rat(2, 1) * &r3);
    ensure(a == rat(1, 50) && slice0 == a, || format!("Δ⁰ volume {a}"))?;
    ensure(b == rat(3, 200) && slice1 == b, || format!("Δ¹ volume {b}"))?;
    Ok(format!("Δ⁰ = {a}, Δ¹ = {b}"))
}

fn criterion_2() -> Outcome {
    let n = 5;
    let p = perimeter_form(n);
    // homogenize (1−2r₃)²/2 and 2r₁(1−r₁−2r₃) with 1 ↦ r₁+…+r₅
    let two = rat(2, 1);
    let slice0 = (&p - &x(n, 2).scale(&two)).pow(2).scale(&rat(1, 2));
    let slice1 = (&x(n, 0) * &(&(&p - &x(n, 0)) - &x(n, 2).scale(&two))).scale(&two);
    let stated0 = (&(&(&(&x(n, 0) + &x(n, 1)) - &x(n, 2)) + &x(n, 3)) + &x(n, 4))
        .pow(2)
        .scale(&rat(1, 2));
    let stated1 = (&x(n, 0) * &(&(&(&x(n, 1) - &x(n, 2)) + &x(n, 3)) + &x(n, 4))).scale(&two);
    for (name, r, slice, stated) in [
        ("Δ⁰", delta0(), slice0, stated0),
        ("Δ¹", delta1(), slice1, stated1),
    ] {
        let v = volume_polynomial(&signature(&r).unwrap());
        ensure(v.poly() == &stated, || {
            format!("{name}: library {} vs stated", v.poly())
        })?;
        ensure(slice == stated, || {
            format!("{name}: homogenized slice differs")
        })?;
        ensure(volume_sum_poly(r.values()) == stated, || {
            format!("{name}: sum expansion differs")
        })?;
    }
    Ok("both polynomials equal the homogenized slices and the expanded sum".into())
}

fn criterion_3() -> Outcome {
    let a5 = Convention::Affine(4);
    let s0 = signature(&delta0()).unwrap();
    let s1 = signature(&delta1()).unwrap();
    let idx = |e: [u32; 5]| MultiIndex::new(e.to_vec());
    let c33 = intersection_number(&s0, &idx([0, 0, 2, 0, 0]), a5).map_err(|e| e.to_string())?;
    let c11 = intersection_number(&s1, &idx([2, 0, 0, 0, 0]), a5).map_err(|e| e.to_string())?;
    let c13 = intersection_number(&s1, &idx([1, 0, 1, 0, 0]), a5).map_err(|e| e.to_string())?;
    ensure(c33 == rat(4, 1), || format!("Δ⁰ ∂₃² = {c33}"))?;
    ensure(c11 == rat(-4, 1), || format!("Δ¹ ∂₁² = {c11}"))?;
    ensure(c13 == rat(-4, 1), || format!("Δ¹ ∂₁∂₃ = {c13}"))?;
    // the slice expressions, differentiated directly
    let n = 5;
    let one = MultiPoly::one(n);
    let two = rat(2, 1);
    let slice0 = (&one - &x(n, 2).scale(&two)).pow(2).scale(&rat(1, 2));
    let slice1 = (&x(n, 0) * &(&(&one - &x(n, 0)) - &x(n, 2).scale(&two))).scale(&two);
    let d = |p: &MultiPoly, e| p.differentiate(&idx(e)).unwrap().constant_term();
    ensure(d(&slice0, [0, 0, 2, 0, 0]) == c33, || {
        "Δ⁰ slice disagrees".into()
    })?;
    ensure(d(&slice1, [2, 0, 0, 0, 0]) == c11, || {
        "Δ¹ slice disagrees (∂₁²)".into()
    })?;
    ensure(d(&slice1, [1, 0, 1, 0, 0]) == c13, || {
        "Δ¹ slice disagrees (∂₁∂₃)".into()
    })?;
    Ok(format!(
        "∂₃² = {c33}, ∂₁² = {c11}, ∂₁∂₃ = {c13} (+4 would contradict differentiating 2r₁(1−r₁−2r₃))"
    ))
}

fn criterion_4() -> Outcome {
    let eq = LengthVector::new((0..5).map(|i| rat(1, 5) + rat(i, 1000)).collect()).unwrap();
    ensure(is_generic(&eq), || {
        "perturbed equilateral point is not generic".into()
    })?;
    let cases = [
        ("Δ⁰", delta0(), vec![1, 1, 1]),
        ("Δ¹", delta1(), vec![1, 2, 1]),
        ("equilateral", eq, vec![1, 5, 1]),
    ];
    for (name, r, expected) in cases {
        let sig = signature(&r).unwrap();
        let apolar = betti_numbers(&sig, Convention::Homogeneous).map_err(|e| e.to_string())?;
        let path = betti_via_path(&r).map_err(|e| e.to_string())?;
        ensure(apolar == expected && path == expected, || {
            format!("{name}: apolar {apolar:?}, path {path:?}, expected {expected:?}")
        })?;
    }
    Ok("(1,1,1), (1,2,1), (1,5,1) by both methods".into())
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    for n in 4..=8 {
        // one side just under half the perimeter, the rest equal
        let nn = n as i64;
        let big = rat(1, 2) - rat(1, 8 * nn);
        let rest = (Rational::one() - &big) / rat(nn - 1, 1);
        let mut r = vec![rest; n];
        r[n - 1] = big;
        let r = LengthVector::new(r).unwrap();
        let sig = signature(&r).map_err(|e| e.to_string())?;
        ensure(sig.maximal_shorts().iter().any(|s| s.len() == 1), || {
            format!("n = {n}: representative is not external")
        })?;
        let b = betti_numbers(&sig, Convention::Homogeneous).map_err(|e| e.to_string())?;
        ensure(b == vec![1; n - 2], || format!("n = {n}: betti {b:?}"))?;
        let ann1 = annihilator_basis(&volume_polynomial(&sig), 1, Convention::Homogeneous)
            .map_err(|e| e.to_string())?;
        ensure(ann1.len() == n - 1, || {
            format!("n = {n}: dim Ann_1 = {}", ann1.len())
        })?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "n = 4..8 all-ones Betti, dim Ann_1 = n−1, {elapsed:.2?}"
    ))
}

fn criterion_6(graphs: &[ChamberGraph]) -> Outcome {
    let mut count = 0;
    for g in graphs {
        for node in g.nonempty() {
            let apolar = betti_numbers(&node.signature, Convention::Homogeneous)
                .map_err(|e| e.to_string())?;
            let path = betti_via_path(&node.representative).map_err(|e| e.to_string())?;
            ensure(apolar == path, || {
                format!("{}: apolar {apolar:?} vs path {path:?}", node.signature)
            })?;
            ensure(apolar.iter().eq(apolar.iter().rev()), || {
                format!("{}: {apolar:?} is not palindromic", node.signature)
            })?;
            count += 1;
        }
    }
    Ok(format!(
        "{count} nonempty chambers at n = 5, 6, zero failures"
    ))
}

fn criterion_7(graphs: &[ChamberGraph]) -> Outcome {
    let mut count = 0;
    for g in graphs {
        let n = g.n;
        for edge in &g.edges {
            let s0 = &g.nodes[edge.from].signature;
            let s1 = &g.nodes[edge.to].signature;
            let ip = edge.wall.index_set();
            ensure(s0.is_long(&ip) && s1.is_short(&ip), || {
                format!("edge {} is misoriented", edge.wall)
            })?;
            let (found, jump) = wall_jump(s0, s1).map_err(|e| e.to_string())?;
            let q = n - ip.len();
            let sign = if q % 2 == 0 { 1 } else { -1 };
            let expected = eps_form(n, ip.mask())
                .pow((n - 3) as u32)
                .scale(&Rational::new(BigInt::from(sign), factorial(n - 3)));
            ensure(found == ip && jump == expected, || {
                format!("{s0} → {s1} across {}: jump {jump}", edge.wall)
            })?;
            count += 1;
        }
    }
    Ok(format!("{count} edges at n = 5, 6, zero failures"))
}

fn criterion_8(rng: &mut ChaCha8Rng) -> Outcome {
    let mut count = 0;
    for n in 4..=7 {
        let mut done = 0;
        while done < 100 {
            let mut r: Vec<i64> = (0..n).map(|_| rng.gen_range(1..1000)).collect();
            let j = rng.gen_range(0..n);
            let rest: i64 = r
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != j)
                .map(|(_, v)| v)
                .sum();
            r[j] = rest + rng.gen_range(1..1000);
            let r = LengthVector::from_ints(&r).unwrap();
            if !is_generic(&r) {
                continue;
            }
            let direct = volume_sum_value(r.values());
            let lib = dh_sum(&r).map_err(|e| e.to_string())?;
            ensure(direct.is_zero() && lib.is_zero(), || {
                format!("{r:?}: sum {direct}")
            })?;
            done += 1;
            count += 1;
        }
    }
    Ok(format!("{count} empty-chamber points, all sums exactly 0"))
}

fn criterion_9(graphs: &[ChamberGraph]) -> Outcome {
    let (mut zero, mut nonzero) = (0, 0);
    for g in graphs {
        let n = g.n;
        for node in g.nonempty() {
            let r = node.representative.values();
            for mask in 1u32..(1 << n) - 1 {
                if mask.count_ones() < 2 {
                    continue;
                }
                let set = IndexSet::from_mask(n, mask).unwrap();
                let pd = pd_class(&set, set.elements()[0]).map_err(|e| e.to_string())?;
                let vanishes = is_zero_class(&pd, &node.signature, Convention::Homogeneous)
                    .map_err(|e| e.to_string())?;
                let e = eps_value(r, mask);
                if e.is_positive() {
                    ensure(vanishes, || {
                        format!("{}: PD of long {set} is nonzero", node.signature)
                    })?;
                    zero += 1;
                } else if set.len() - 1 <= n - 3 {
                    ensure(!vanishes, || {
                        format!("{}: PD of short {set} vanishes", node.signature)
                    })?;
                    nonzero += 1;
                }
            }
        }
    }
    Ok(format!(
        "{zero} vanishing and {nonzero} non-vanishing checks, zero failures"
    ))
}

fn random_generic(rng: &mut ChaCha8Rng, n: usize) -> LengthVector {
    loop {
        let v: Vec<i64> = (0..n).map(|_| rng.gen_range(1..10_000)).collect();
        let r = LengthVector::from_ints(&v).unwrap();
        if is_generic(&r) {
            return r;
        }
    }
}

fn criterion_10(rng: &mut ChaCha8Rng) -> Outcome {
    const CASES: usize = 500;
    for _ in 0..CASES {
        // Euler: Σ r_i ∂_i v = (n−3) v
        let n = rng.gen_range(4..=7);
        let r = random_generic(rng, n);
        let v = volume_polynomial(&signature(&r).unwrap());
        let euler = (0..n).fold(MultiPoly::zero(n), |acc, i| {
            &acc + &(&x(n, i) * &v.poly().partial(i))
        });
        ensure(euler == v.poly().scale(&rat(n as i64 - 3, 1)), || {
            format!("Euler fails at {r:?}")
        })?;
    }
    for _ in 0..CASES {
        // relabeling sides moves signature and volume along
        let n = rng.gen_range(4..=7);
        let r = random_generic(rng, n);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        let sig = signature(&r).unwrap();
        let moved = r.permute(&perm);
        let moved_sig = signature(&moved).unwrap();
        ensure(moved_sig == sig.permute(&perm), || {
            format!("signature not equivariant at {r:?}")
        })?;
        let v = volume_polynomial(&sig);
        let w = volume_polynomial(&moved_sig);
        ensure(w.poly() == &v.poly().permute(&perm), || {
            format!("volume not equivariant at {r:?}")
        })?;
    }
    for _ in 0..CASES {
        let n = rng.gen_range(3..=9);
        let r = random_generic(rng, n);
        let lambda = rat(rng.gen_range(1..1000), rng.gen_range(1..1000));
        let scaled = r.scaled(&lambda).unwrap();
        ensure(
            signature(&scaled).unwrap() == signature(&r).unwrap(),
            || format!("signature changes under scaling at {r:?}"),
        )?;
    }
    let mut reversed = 0;
    while reversed < CASES {
        let n = rng.gen_range(3..=7);
        let a = random_generic(rng, n);
        let b = random_generic(rng, n);
        let b = b.scaled(&(a.perimeter() / b.perimeter())).unwrap();
        let (Ok(fwd), Ok(bwd)) = (segment_crossings(&a, &b), segment_crossings(&b, &a)) else {
            continue;
        };
        let mirrored: Vec<_> = bwd
            .iter()
            .rev()
            .map(|c| (Rational::one() - &c.t, c.wall.reversed()))
            .collect();
        let forward: Vec<_> = fwd.iter().map(|c| (c.t.clone(), c.wall)).collect();
        ensure(forward == mirrored, || {
            format!("segment {a:?} → {b:?} is not reverse-symmetric")
        })?;
        reversed += 1;
    }
    Ok(format!(
        "{CASES} instances each: Euler, equivariance, scaling, segment reversal"
    ))
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(20240607);
    let mut failures = 0;
    let mut report = |k: usize, title: &str, outcome: Outcome| match outcome {
        Ok(detail) => println!("criterion {k:>2} PASS  {title}: {detail}"),
        Err(detail) => {
            failures += 1;
            println!("criterion {k:>2} FAIL  {title}: {detail}");
        }
    };

    report(1, "volume values", criterion_1());
    report(2, "volume polynomials", criterion_2());
    report(3, "affine intersection numbers", criterion_3());
    report(4, "Betti vectors by two methods", criterion_4());
    report(5, "external chambers", criterion_5());

    let graphs: Vec<ChamberGraph> = match (5..=6).map(|n| enumerate_chambers(n, 100_000)).collect()
    {
        Ok(g) => g,
        Err(e) => {
            for (k, title) in [
                (6, "exhaustive Betti"),
                (7, "wall jumps"),
                (9, "Poincaré duals"),
            ] {
                report(k, title, Err(format!("enumeration failed: {e}")));
            }
            Vec::new()
        }
    };
    if !graphs.is_empty() {
        report(6, "exhaustive Betti", criterion_6(&graphs));
        report(7, "wall jumps", criterion_7(&graphs));
    }
    report(8, "empty chambers", criterion_8(&mut rng));
    if !graphs.is_empty() {
        report(9, "Poincaré duals", criterion_9(&graphs));
    }
    report(10, "property suites", criterion_10(&mut rng));

    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
