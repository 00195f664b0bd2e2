use modalcad_core::binding::Keymap;
use modalcad_core::scene::View;
use modalcad_core::trace::{self, metrics, parse_trace, replay, ReplayOptions, TraceBuilder};
use modalcad_core::{Directive, Lexicon, Primitive};

const ARCH: &str = include_str!("data/arch.jsonl");

fn run_arch() -> trace::ReplayOutput {
    let recs = parse_trace(ARCH).unwrap();
    replay(
        &recs,
        &Lexicon::default(),
        &Keymap::default(),
        &ReplayOptions::default(),
    )
    .unwrap()
}

#[test]
fn fixture_matches_builder() {
    assert_eq!(trace::to_jsonl(&TraceBuilder::arch()), ARCH);
}

#[test]
fn arch_builds_two_uprights_and_a_lintel() {
    let out = run_arch();
    let got: Vec<_> = out
        .scene
        .objects()
        .iter()
        .map(|o| (o.id, o.primitive, o.translation, o.rotation, o.scale))
        .collect();
    let zero = [0.0; 3];
    assert_eq!(
        got,
        vec![
            (1, Primitive::Cube, [-1.5, 0.0, 0.0], zero, [1.0, 1.0, 3.0]),
            (2, Primitive::Cube, [1.5, 0.0, 0.0], zero, [1.0, 1.0, 3.0]),
            (3, Primitive::Cube, [0.0, 0.0, 3.5], zero, [4.0, 1.0, 1.0]),
        ]
    );
    assert_eq!(out.scene.selection(), Some(1));
    assert_eq!(out.scene.view(), View::Front);
    // three creates, five voice transforms, one grab; the undone scale is gone
    assert_eq!(out.scene.undo_depth(), 3 + 5 + 1);
}

#[test]
fn arch_replay_is_byte_identical() {
    let a = run_arch();
    let b = run_arch();
    assert_eq!(a.scene.to_canonical_json(), b.scene.to_canonical_json());
    let log = |o: &trace::ReplayOutput| serde_json::to_string(&o.log).unwrap();
    assert_eq!(log(&a), log(&b));
    let acts = |o: &trace::ReplayOutput| serde_json::to_string(&o.actions).unwrap();
    assert_eq!(acts(&a), acts(&b));
}

#[test]
fn arch_logs_and_actions() {
    let out = run_arch();
    let selects: Vec<_> = trace::directives(&out.log)
        .filter_map(|d| match d {
            Directive::SelectAt { target, .. } => Some(*target),
            _ => None,
        })
        .collect();
    assert_eq!(selects, [Some(1)]);
    assert!(out.actions.iter().all(|a| a.actions.is_balanced()));
    let undo = out.actions.last().unwrap();
    assert_eq!(undo.kind, "undo");
    assert_eq!(undo.t, 70_000);

    let m = metrics(&out.log, out.span.0, out.span.1);
    let p = m.phase_durations;
    assert_eq!(p.warmup, 0.0);
    assert!(p.total() <= (out.span.1 - out.span.0) as f64 / 1000.0);
    assert_eq!(m.per_command_counts["create_cube"], 3);
    assert_eq!(m.per_command_counts["front"], 1);
    // grab hold (12.5 s to 16.5 s) plus the selecting right pinch
    assert!(m.modality_time.gesture_s > 4.0);
    let chunks = m.modality_time.speech_s / 2.5;
    assert_eq!(chunks.fract(), 0.0);
}

mod random_sessions {
    use super::*;
    use modalcad_core::Hand;
    use proptest::prelude::*;

    const WORDS: &[&str] = &[
        "create cube",
        "create cylinder",
        "scale",
        "rotate",
        "translate",
        "two",
        "three point five",
        "lateral",
        "vertical",
        "enter",
        "escape",
        "undo",
        "front",
        "greater",
        "down",
        "mumble",
    ];

    #[derive(Debug, Clone)]
    enum Act {
        Say(usize),
        Pose(bool, f64, f64, bool),
    }

    fn act() -> impl Strategy<Value = Act> {
        prop_oneof![
            (0..WORDS.len()).prop_map(Act::Say),
            (any::<bool>(), 0.0..1.0f64, 0.0..1.0f64, any::<bool>())
                .prop_map(|(r, x, y, p)| Act::Pose(r, x, y, p)),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn metrics_stay_within_the_span(acts in prop::collection::vec((act(), 0u64..3000), 1..80)) {
            let mut b = TraceBuilder::new();
            let mut t = 0;
            for (a, dt) in acts {
                t += dt;
                b = match a {
                    Act::Say(i) => b.say(t, WORDS[i]),
                    Act::Pose(right, x, y, pinch) => {
                        let hand = if right { Hand::Right } else { Hand::Left };
                        b.pose(t, hand, [x, y], if pinch { 0.0 } else { 0.2 })
                    }
                };
            }
            let recs = b.build();
            let out = replay(&recs, &Lexicon::default(), &Keymap::default(), &ReplayOptions::default()).unwrap();
            let m = metrics(&out.log, out.span.0, out.span.1);
            let span = (out.span.1 - out.span.0) as f64 / 1000.0;
            let p = m.phase_durations;
            for v in [p.warmup, p.creation, p.manipulation, p.navigation, m.modality_time.speech_s, m.modality_time.gesture_s] {
                prop_assert!(v >= 0.0);
            }
            prop_assert!(p.total() <= span + 1e-9, "{p:?} vs {span}");
            prop_assert!(m.modality_time.gesture_s <= span + 1e-9);
            prop_assert_eq!((m.modality_time.speech_s / 2.5).fract(), 0.0);

            let again = replay(&recs, &Lexicon::default(), &Keymap::default(), &ReplayOptions::default()).unwrap();
            prop_assert_eq!(out.scene.to_canonical_json(), again.scene.to_canonical_json());
        }
    }
}
