use num_bigint::BigInt;
use reprk::church::{check_church, standard_probes};
use reprk::evaluators::{eval_card_n, eval_ord, Status};
use reprk::fixtures::{builtin, default_dir, load_dir, manifest_text, registry_text, FixtureMode};
use reprk::order::quotient;
use reprk::overshoot::{emulate_cardz, emulate_ord};
use reprk::{nat, Oracle, OracleSource};

const T: u64 = 10_000;

#[test]
fn halting_fixtures_match_their_flags() {
    let set = builtin();
    let u = set.universe();
    for f in set.by_mode(FixtureMode::Halt) {
        let t = u.run_nat(&f.program, None, T).unwrap();
        match f.meta.expect {
            Some(v) => assert_eq!(t.halted, Some(nat(v as u64)), "{}", f.name()),
            None => assert!(t.halted.is_none(), "{}", f.name()),
        }
        assert_eq!(
            u.registry().is_divergent(&f.program),
            f.meta.expect.is_none()
        );
    }
}

#[test]
fn stream_fixtures_emit_as_declared() {
    let set = builtin();
    let u = set.universe();
    for f in set.by_mode(FixtureMode::Stream) {
        let t = u.run_stream(&f.program, None, T).unwrap();
        assert_eq!(t.emits() as i64, f.meta.expect.unwrap(), "{}", f.name());
        assert!(t.settled.acceptable());
    }
}

#[test]
fn function_fixtures_halt_exactly_on_their_domain() {
    let set = builtin();
    let u = set.universe();
    for f in set.by_mode(FixtureMode::Func) {
        let Some(domain) = &f.meta.domain else {
            continue;
        };
        for x in 0..16u64 {
            let a = u.apply_func(&f.program, &nat(x), T).unwrap();
            assert_eq!(
                a.value.is_some(),
                domain.contains(&x),
                "{} at {x}",
                f.name()
            );
        }
        let r = eval_card_n(&u, &f.program, T).unwrap();
        assert_eq!(r.status, Status::Exact, "{}", f.name());
        assert_eq!(r.value, Some(BigInt::from(domain.len())));
    }
}

#[test]
fn relation_fixtures_have_declared_order_types() {
    let set = builtin();
    let u = set.universe();
    for f in set.by_mode(FixtureMode::Func2) {
        let edges = f.meta.edges.as_ref().unwrap();
        for x in 0..5u64 {
            for y in 0..5u64 {
                let a = u.apply_rel(&f.program, &nat(x), &nat(y), T).unwrap();
                assert_eq!(
                    a.value.is_some(),
                    edges.contains(&[x, y]),
                    "{} at {x},{y}",
                    f.name()
                );
            }
        }
        let r = eval_ord(&u, &f.program, T).unwrap();
        match f.meta.expect {
            Some(n) => assert_eq!(r.value, Some(BigInt::from(n)), "{}", f.name()),
            None => assert_eq!(r.status, Status::UndefinedDetected, "{}", f.name()),
        }
    }
}

#[test]
fn effop_fixtures_are_classified() {
    let set = builtin();
    let u = set.universe();
    let probes = standard_probes(4, 7);
    for f in set.by_mode(FixtureMode::Effop) {
        let check = check_church(&u, &f.program, &probes, T).unwrap();
        let iterator = f.meta.iterator.unwrap();
        assert_eq!(check.accepted().is_some(), iterator, "{}", f.name());
        if iterator {
            assert_eq!(check.accepted(), Some(&nat(f.meta.expect.unwrap() as u64)));
        }
    }
}

#[test]
fn oracle_fixtures_answer_truthfully_and_emulate() {
    let set = builtin();
    let u = set.universe();
    for f in set.by_mode(FixtureMode::Oracle) {
        let answers = f.meta.answers.clone().unwrap();
        let mut scripted = OracleSource::scripted(answers.clone());
        let t = u
            .run_nat(&f.program, Some(&mut scripted as &mut dyn Oracle), T)
            .unwrap();
        let want = nat(f.meta.expect.unwrap() as u64);
        assert_eq!(t.halted.as_ref(), Some(&want), "{}", f.name());

        let mut truth = OracleSource::RegistryAugmented { budget: T };
        let t = u
            .run_nat(&f.program, Some(&mut truth as &mut dyn Oracle), T)
            .unwrap();
        assert_eq!(t.halted, Some(want), "{}", f.name());
        assert!(t.certain, "{}", f.name());

        let e = emulate_cardz(&u, &f.program, T).unwrap();
        assert_eq!(e.difference(), f.meta.expect.unwrap(), "{}", f.name());
        assert_eq!(e.answers, answers, "{}", f.name());
    }
}

#[test]
fn oracle_stream_fixtures_emulate_as_chains() {
    let set = builtin();
    let u = set.universe();
    for f in set.by_mode(FixtureMode::Ostream) {
        let mut truth = OracleSource::RegistryAugmented { budget: T };
        let t = u
            .run_stream(&f.program, Some(&mut truth as &mut dyn Oracle), T)
            .unwrap();
        assert_eq!(t.emits() as i64, f.meta.expect.unwrap(), "{}", f.name());

        let e = emulate_ord(&u, &f.program, T).unwrap();
        let edges: Vec<_> = e.relation.point_list().cloned().collect();
        let classes = quotient(&edges).classes();
        assert_eq!(
            classes,
            Some(f.meta.expect.unwrap() as usize),
            "{}",
            f.name()
        );
    }
}

#[test]
fn shipped_directory_matches_builtin() {
    let dir = default_dir();
    let shipped =
        load_dir(&dir).expect("fixture directory is present; run `repr fixtures --write`");
    let set = builtin();
    assert_eq!(shipped.fixtures, set.fixtures);
    let manifest = std::fs::read_to_string(dir.join("manifest.toml")).unwrap();
    assert_eq!(manifest, manifest_text(&set));
    let registry = std::fs::read_to_string(dir.join("registry.txt")).unwrap();
    assert_eq!(registry, registry_text(&set));
}
