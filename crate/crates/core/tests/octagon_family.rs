use fakeoct::families::systole_closed_form;
use fakeoct::io::{load_surface, save_surface};
use fakeoct::octagon::{
    build_complex, extract_normal_form, horizontals, left_iterate, normal_form, octagon0, surgery_step, verify_fake,
};
use fakeoct::period::absolute_period_module;
use fakeoct::search::systole;
use fakeoct::surgery::{return_angle, twins_of, Side};
use fakeoct::{EdgeRef, Face, FlatComplex, Gluing, Point2, QSqrt2};

fn orders(c: &FlatComplex) -> Vec<u32> {
    // regular vertices are an artifact of the presentation
    let mut v: Vec<u32> = c.vertex_classes().unwrap().iter().map(|k| k.order as u32).filter(|&o| o > 0).collect();
    v.sort();
    v
}

#[test]
fn right_undoes_left() {
    let mut c = octagon0();
    for n in 0..=20 {
        let back = surgery_step(&c, Side::Right).unwrap();
        assert_eq!(extract_normal_form(&back).unwrap(), normal_form(n - 1).positions(), "n = {n}");
        c = surgery_step(&c, Side::Left).unwrap();
    }
    let up = surgery_step(&left_iterate(-1).unwrap(), Side::Left).unwrap();
    assert_eq!(extract_normal_form(&up).unwrap(), normal_form(0).positions());
}

#[test]
fn surgery_conserves_invariants() {
    let periods = absolute_period_module(&octagon0()).unwrap();
    for side in [Side::Left, Side::Right] {
        let mut c = octagon0();
        for _ in 0..6 {
            let next = surgery_step(&c, side).unwrap();
            assert_eq!(next.area(), c.area());
            assert_eq!(next.genus().unwrap(), c.genus().unwrap());
            assert_eq!(orders(&next), orders(&c));
            assert_eq!(absolute_period_module(&next).unwrap(), periods);
            c = next;
        }
    }
}

#[test]
fn unit_connection_and_twins_at_every_iterate() {
    let long = QSqrt2::from_ints(3, 2);
    let mut c = octagon0();
    for n in 0..=10 {
        let hz = horizontals(&c).unwrap();
        assert_eq!(hz.gamma.sq_len, QSqrt2::one());
        assert_eq!((hz.eta.sq_len.clone(), hz.other.sq_len.clone()), (long.clone(), long.clone()));
        assert_eq!(return_angle(&c, &hz.gamma).unwrap(), 3, "n = {n}");
        let set = twins_of(&c, &hz.gamma).unwrap();
        assert_eq!(set.twins.len(), 2);
        for t in &set.twins {
            assert_eq!(t.segment.sq_len, hz.gamma.sq_len);
            assert_eq!(t.segment.holonomy(), hz.gamma.holonomy());
        }
        c = surgery_step(&c, Side::Left).unwrap();
    }
}

#[test]
fn second_iterate_has_two_systoles() {
    let (sq, sys) = systole(&left_iterate(2).unwrap()).unwrap();
    assert_eq!(sq, QSqrt2::from_ints(2, -1));
    assert_eq!(sys.len(), 2);
    assert_eq!(systole_closed_form(2).unwrap().count, 2);
}

#[test]
fn fake_reports() {
    let o = verify_fake(&octagon0());
    assert!(o.invariants_hold());
    assert!(!o.is_fake);
    assert!(verify_fake(&build_complex(&normal_form(7)).unwrap()).is_fake);
    assert!(verify_fake(&left_iterate(1).unwrap()).is_fake);
    let torus = verify_fake(&torus());
    assert!(torus.valid && !torus.single_cone_point && !torus.is_fake);
}

#[test]
fn iterates_round_trip_through_json() {
    let mut c = octagon0();
    for _ in 0..5 {
        c = surgery_step(&c, Side::Left).unwrap();
        let text = save_surface(&c);
        let back = load_surface(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(save_surface(&back), text);
    }
}

#[test]
fn strip_marks_name_the_cone_point() {
    let c = build_complex(&normal_form(5)).unwrap();
    let topo = c.topology().unwrap();
    let cone = topo.cone_classes()[0];
    for label in ["P_n", "P_{n-1}", "P'_n", "B", "C", "E"] {
        assert_eq!(topo.class_of(c.marks[label]), cone, "{label}");
    }
}

fn torus() -> FlatComplex {
    let p = |x: i64, y: i64| Point2::new(QSqrt2::from_int(x), QSqrt2::from_int(y));
    let e = |edge| EdgeRef { face: 0, edge };
    FlatComplex {
        faces: vec![Face { id: "sq".into(), vertices: vec![p(0, 0), p(1, 0), p(1, 1), p(0, 1)] }],
        gluings: vec![Gluing(e(0), e(2)), Gluing(e(1), e(3))],
        marks: Default::default(),
    }
}
