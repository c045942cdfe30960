//! The acceptance suite: one PASS/FAIL line per criterion.

use std::collections::{BTreeSet, HashSet};
use std::time::{Duration, Instant};

use fakeoct::families::{
    approximate, brute_force_partners, connection_labels, density_relation_holds, family_one_representative,
    same_systole_partners, surface_distance, systole_closed_form,
};
use fakeoct::io::{load_surface, save_surface};
use fakeoct::octagon::{
    build_complex, extract_normal_form, horizontals, left_iterate, normal_form, octagon0, strip, surgery_step,
    verify_fake,
};
use fakeoct::period::absolute_period_module;
use fakeoct::search::{saddle_connections_up_to, systole};
use fakeoct::surgery::{slit_and_reglue, surgery_admissible, twin_on_side, Side};
use fakeoct::{FlatComplex, QSqrt2};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e2s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Iterates for n in [-20, 20], each computed by one surgery from its neighbor.
fn iterates() -> Result<Vec<(i64, FlatComplex)>, String> {
    let mut out = vec![(0, octagon0())];
    for side in [Side::Left, Side::Right] {
        let mut c = octagon0();
        for k in 1..=20 {
            c = surgery_step(&c, side).map_err(e2s)?;
            out.push((if side == Side::Left { k } else { -k }, c.clone()));
        }
    }
    out.sort_by_key(|(n, _)| *n);
    Ok(out)
}

fn single_cone_of_order_two(c: &FlatComplex) -> Result<bool, String> {
    let classes = c.vertex_classes().map_err(e2s)?;
    let cones: Vec<_> = classes.iter().filter(|k| k.order != 0).collect();
    Ok(cones.len() == 1 && cones[0].order == 2)
}

fn c1() -> Check {
    let o = octagon0();
    ensure(o.validate().is_valid(), "octagon0 does not validate")?;
    let topo = o.topology().map_err(e2s)?;
    let cones = topo.cone_classes();
    ensure(topo.classes.len() == 1 && cones.len() == 1, "expected one vertex class")?;
    ensure(topo.classes[0].order == 2, "cone order is not 2")?;
    let angle: f64 = topo.classes[0].members.iter().map(|&k| topo.corner_angle(&o, k)).sum();
    ensure((angle - 6.0 * std::f64::consts::PI).abs() < 1e-9, format!("angle sum {angle}"))?;
    ensure(o.genus().map_err(e2s)? == 2, "genus")?;
    ensure(o.area() == QSqrt2::from_ints(2, 2), "area")?;
    let (sq, sys) = systole(&o).map_err(e2s)?;
    ensure(sq == QSqrt2::one() && sys.len() == 4, format!("systole {sq} x{}", sys.len()))?;
    Ok(format!("angle sum 6π{:+.1e}, systole 1 x4", angle - 6.0 * std::f64::consts::PI))
}

fn c2() -> Check {
    let o = octagon0();
    let bc = horizontals(&o).map_err(e2s)?.gamma;
    let twin = twin_on_side(&o, &bc, Side::Left).map_err(e2s)?;
    let c = slit_and_reglue(&o, &bc, &twin).map_err(e2s)?;
    let pos = extract_normal_form(&c).map_err(e2s)?;
    ensure(pos.p == QSqrt2::from_int(2) && pos.pp == QSqrt2::one(), format!("extracted ({}, {})", pos.p, pos.pp))?;
    ensure(verify_fake(&c).is_fake, "verify_fake rejects the result")?;
    Ok("(P, P') = (2, 1), fake".into())
}

fn c3(its: &[(i64, FlatComplex)]) -> Check {
    for (n, c) in its {
        let pos = extract_normal_form(c).map_err(|e| format!("n = {n}: {e}"))?;
        ensure(pos == normal_form(*n).positions(), format!("n = {n}: extracted ({}, {})", pos.p, pos.pp))?;
    }
    for n in [-3, 4] {
        let direct = left_iterate(n).map_err(e2s)?;
        let stepped = &its.iter().find(|(m, _)| *m == n).unwrap().1;
        ensure(save_surface(&direct) == save_surface(stepped), format!("left_iterate({n}) differs from stepping"))?;
    }
    Ok(format!("{} iterates match the closed form", its.len()))
}

fn c4(its: &[(i64, FlatComplex)]) -> Check {
    let periods = absolute_period_module(&octagon0()).map_err(e2s)?;
    for (n, c) in its {
        ensure(c.area() == QSqrt2::from_ints(2, 2), format!("n = {n}: area"))?;
        ensure(c.genus().map_err(e2s)? == 2, format!("n = {n}: genus"))?;
        ensure(single_cone_of_order_two(c)?, format!("n = {n}: cone points"))?;
        ensure(absolute_period_module(c).map_err(e2s)? == periods, format!("n = {n}: periods"))?;
    }
    Ok(format!("periods {periods}"))
}

fn c5(its: &[(i64, FlatComplex)]) -> Check {
    for (n, c) in its.iter().filter(|(n, _)| (-10..=10).contains(n)) {
        let back = surgery_step(c, Side::Right).map_err(|e| format!("n = {n}: {e}"))?;
        let pos = extract_normal_form(&back).map_err(e2s)?;
        ensure(pos == normal_form(n - 1).positions(), format!("n = {n}: right surgery gives ({}, {})", pos.p, pos.pp))?;
    }
    Ok("right surgery lands on n-1 for n in [-10, 10]".into())
}

fn c6() -> Check {
    let all: HashSet<_> = (-50..=50).map(|n| normal_form(n).positions()).collect();
    ensure(all.len() == 101, format!("only {} distinct normal forms", all.len()))?;
    let mut lengths = BTreeSet::new();
    for n in 1..=200 {
        lengths.insert(systole_closed_form(n).map_err(e2s)?.sq_len);
    }
    ensure(lengths.len() >= 50, format!("only {} distinct systole lengths", lengths.len()))?;
    Ok(format!("101 distinct forms, {} distinct systole lengths", lengths.len()))
}

fn c7() -> Check {
    for n in (-30..=30).filter(|&n| n != 0) {
        let c = build_complex(&normal_form(n)).map_err(e2s)?;
        let (sq, sys) = systole(&c).map_err(e2s)?;
        let cf = systole_closed_form(n).map_err(e2s)?;
        let mut got: Vec<_> = sys.iter().map(|s| connection_labels(&c, s)).collect();
        got.sort();
        let mut want: Vec<_> = cf.endpoints.iter().cloned().map(Some).collect();
        want.sort();
        ensure(sq == cf.sq_len, format!("n = {n}: search {sq}, closed form {}", cf.sq_len))?;
        ensure(sys.len() == cf.count, format!("n = {n}: {} systoles, expected {}", sys.len(), cf.count))?;
        ensure(got == want, format!("n = {n}: endpoints {got:?}, expected {want:?}"))?;
    }
    Ok("60 surfaces agree in length, count and endpoints".into())
}

fn c8() -> Check {
    let split = &strip::top() * &QSqrt2::from_fracs(1, 2, 0, 1);
    let (mut six, mut two) = (0, 0);
    for n in 1..=30 {
        let set = same_systole_partners(n).map_err(e2s)?;
        let brute = brute_force_partners(n, -100..=100).map_err(e2s)?;
        ensure(set == brute, format!("n = {n}: {set:?} vs brute force {brute:?}"))?;
        ensure(set.contains(&n), format!("n = {n} missing from its own set"))?;
        // the two shapes, written in the index k = n0 + 1
        let n0 = family_one_representative(n).map_err(e2s)?;
        let k = n0 + 1;
        let shifted: BTreeSet<i64> = set.iter().map(|m| m + 1).collect();
        let x = normal_form(n0).p;
        let expected: BTreeSet<i64> = if x > split {
            six += 1;
            [k, k + 1, k + 2, -k, -k + 1, -k + 2].into()
        } else {
            two += 1;
            [k, -k + 2].into()
        };
        ensure(shifted == expected, format!("n = {n}: shape {shifted:?} vs {expected:?}"))?;
    }
    Ok(format!("brute force agrees; {six} six-element and {two} two-element sets (shapes in the index shifted by one)"))
}

fn c9() -> Check {
    ensure(density_relation_holds(), "2/(2+√2) + 1/(1+√2) != 1")?;
    let mut notes = Vec::new();
    for m in [0, 1, 5] {
        let a = approximate(m, 0.01, 100_000);
        ensure(a.reached && a.n != m, format!("m = {m}: not reached"))?;
        ensure(a.dist_exact == surface_distance(a.n, m), format!("m = {m}: distance mismatch"))?;
        ensure(a.dist_exact < QSqrt2::from_fracs(1, 100, 0, 1), format!("m = {m}: exact distance {}", a.dist_exact))?;
        notes.push(format!("m={m}→n={}", a.n));
    }
    Ok(notes.join(", "))
}

fn c10(its: &[(i64, FlatComplex)]) -> Check {
    for (n, c) in its.iter().filter(|(n, _)| (0..=10).contains(n)) {
        let g = horizontals(c).map_err(e2s)?.gamma;
        let t = twin_on_side(c, &g, Side::Left).map_err(e2s)?;
        let r = surgery_admissible(c, &g, &t).map_err(e2s)?;
        ensure(r.conditions() == (true, true, true), format!("n = {n}: {:?}", r.conditions()))?;
    }
    Ok("(true, true, true) at n = 0..10".into())
}

fn c11(its: &[(i64, FlatComplex)]) -> Check {
    let mut generated: Vec<FlatComplex> =
        (-30..=30).map(|n| build_complex(&normal_form(n)).map_err(e2s)).collect::<Result<_, _>>()?;
    generated.extend(its.iter().map(|(_, c)| c.clone()));
    for c in &generated {
        let text = save_surface(c);
        let back = load_surface(&text).map_err(e2s)?;
        ensure(&back == c, "load(save(c)) != c")?;
        ensure(save_surface(&back) == text, "save is not stable")?;
    }
    let again = iterates()?;
    for ((n, a), (_, b)) in its.iter().zip(&again) {
        ensure(save_surface(a) == save_surface(b), format!("n = {n}: iteration is not deterministic"))?;
    }
    let c = build_complex(&normal_form(6)).map_err(e2s)?;
    let r2 = QSqrt2::from_int(3);
    ensure(
        saddle_connections_up_to(&c, &r2).map_err(e2s)? == saddle_connections_up_to(&c, &r2).map_err(e2s)?,
        "search is not deterministic",
    )?;
    Ok(format!("{} complexes round-trip", generated.len()))
}

fn main() {
    let mut failed = 0;
    let mut report = |k: usize, name: &str, limit: Option<Duration>, f: &mut dyn FnMut() -> Check| {
        let t = Instant::now();
        let mut r = f();
        let dt = t.elapsed();
        if let (Ok(_), Some(l)) = (&r, limit) {
            if dt > l {
                r = Err(format!("took {dt:.2?}, limit {l:?}"));
            }
        }
        match r {
            Ok(note) => println!("PASS  {k:>2}. {name} [{dt:.2?}]: {note}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {k:>2}. {name} [{dt:.2?}]: {why}");
            }
        }
    };
    let s = |x: u64| Some(Duration::from_secs(x));
    report(1, "octagon baseline", s(1), &mut c1);
    report(2, "first surgery", s(1), &mut c2);
    let t = Instant::now();
    let its = iterates();
    let build = t.elapsed();
    let its = match its {
        Ok(v) => v,
        Err(e) => {
            println!("FAIL  iterates could not be built: {e}");
            std::process::exit(1);
        }
    };
    report(3, "oracle equivalence", Some(Duration::from_secs(30).saturating_sub(build)), &mut || c3(&its));
    report(4, "invariance under surgery", None, &mut || c4(&its));
    report(5, "invertibility", None, &mut || c5(&its));
    report(6, "distinctness", s(5), &mut c6);
    report(7, "systole families", s(60), &mut c7);
    report(8, "partner sets", s(10), &mut c8);
    report(9, "density", s(10), &mut c9);
    report(10, "admissibility", None, &mut || c10(&its));
    report(11, "round trip and determinism", None, &mut || c11(&its));
    println!("{} of 11 criteria passed", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
