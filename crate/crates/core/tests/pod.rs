use podsim_core::pod::{self, ExposurePolicy};
use podsim_core::rng::{stream, Stream};
use podsim_core::{
    Belief, ContagionModel, GraphKind, Institution, Message, MessageSchedule, RunConfig, SimState,
    SocialGraph,
};
use proptest::prelude::*;

mod common;
use common::b;

fn model() -> impl Strategy<Value = ContagionModel> {
    prop_oneof![
        (0.01f64..0.99).prop_map(|p| ContagionModel::Simple { p }),
        (0.0f64..=1.0).prop_map(|alpha| ContagionModel::Complex { alpha }),
        (0u32..=6).prop_map(|gamma| ContagionModel::CognitiveThreshold { gamma }),
        (0.1f64..3.0, 0.0f64..3.0)
            .prop_map(|(gamma, alpha)| ContagionModel::CognitiveLinear { gamma, alpha }),
        (0.0f64..8.0, 0.0f64..6.0)
            .prop_map(|(alpha, gamma)| ContagionModel::CognitiveSigmoid { alpha, gamma }),
    ]
}

fn schedule() -> impl Strategy<Value = MessageSchedule> {
    prop_oneof![
        Just(MessageSchedule::single()),
        Just(MessageSchedule::split()),
        Just(MessageSchedule::gradual()),
        (0u8..=6, 0u8..=6, 1u32..5).prop_map(|(s, e, i)| MessageSchedule::Gradual {
            start: b(s),
            end: b(e),
            interval: i
        }),
    ]
}

fn policy() -> impl Strategy<Value = ExposurePolicy> {
    prop_oneof![
        Just(ExposurePolicy::PerCopy),
        Just(ExposurePolicy::FirstCopy)
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn steps_keep_beliefs_valid_and_share_the_original_level(
        g in common::small_graph(12),
        model in model(),
        schedule in schedule(),
        policy in policy(),
        seed in any::<u64>(),
        epsilon in 0u8..=6,
    ) {
        let inst = Institution::with_subscribers(0, &g, Belief::MAX, epsilon);
        let ticks = 30;
        let mut st = SimState::new(g, vec![inst], model, stream(seed, Stream::Simulation)).with_policy(policy);
        for t in 1..=ticks {
            let report = st.step(&schedule, ticks).unwrap();
            prop_assert_eq!(report.tick, t);
            prop_assert!((report.histogram.sum() - 1.0).abs() < 1e-9);
            let levels = schedule.levels_at(t, ticks).unwrap();
            let sent: Vec<Belief> = report.messages.iter().map(|m| m.belief).collect();
            prop_assert_eq!(sent, levels);
            prop_assert!(st.graph().beliefs().iter().all(|x| x.get() <= 6));
        }
        prop_assert!(st.step(&schedule, ticks).is_err());
    }

    #[test]
    fn believing_adopts_the_message_level(
        g in common::small_graph(8),
        model in model(),
        level in 0u8..=6,
        seed in any::<u64>(),
    ) {
        let n = g.node_count();
        let mut st = SimState::new(g, vec![], model, stream(seed, Stream::Simulation));
        for (uid, receiver) in (0..n).enumerate() {
            let msg = Message { uid: uid as u64, belief: b(level), origin: 0, tick: 1 };
            let fraction = st.matching_fraction(receiver, msg.belief);
            if st.deliver(receiver, &msg, fraction) {
                prop_assert_eq!(st.graph().belief(receiver), msg.belief);
                prop_assert!(st.has_processed(receiver, msg.uid));
            }
        }
    }

    #[test]
    fn runs_are_reproducible(seed in any::<u64>(), model in model(), schedule in schedule()) {
        let mut c = RunConfig::new(GraphKind::ErdosRenyi { n: 40, rho: 0.15 }, model, schedule, seed);
        c.ticks = 20;
        prop_assert_eq!(pod::run(&c).unwrap(), pod::run(&c).unwrap());
    }
}

#[test]
fn repeated_exposure_compounds() {
    // a b = 3 agent hearing k distinct level-6 messages believes with 1 - (1 - 0.018)^k
    let beta = 1.0 / (1.0 + 4f64.exp());
    let trials = 20_000;
    for k in [1u64, 5, 20, 60] {
        let mut hits = 0;
        for t in 0..trials {
            let g = SocialGraph::from_edges(vec![b(3)], []).unwrap();
            let rng = stream(t * 131 + k, Stream::Simulation);
            let mut st = SimState::new(g, vec![], ContagionModel::dcc(), rng);
            for uid in 0..k {
                let msg = Message {
                    uid,
                    belief: b(6),
                    origin: 0,
                    tick: 1,
                };
                if st.deliver(0, &msg, 0.0) {
                    hits += 1;
                    break;
                }
            }
        }
        let want = 1.0 - (1.0 - beta).powi(k as i32);
        let got = hits as f64 / trials as f64;
        let sigma = (want * (1.0 - want) / trials as f64).sqrt();
        assert!((got - want).abs() <= 3.0 * sigma, "k={k}: {got} vs {want}");
    }
}

#[test]
fn first_copy_gives_one_trial_per_message() {
    // two b = 6 subscribers share a b = 3 neighbor; with a guaranteed relay the
    // neighbor still gets only one roll per message
    let g = SocialGraph::from_edges(vec![b(6), b(6), b(3)], [(0, 2), (1, 2)]).unwrap();
    let inst = Institution::with_subscribers(0, &g, b(6), 0);
    let mut st = SimState::new(
        g,
        vec![inst],
        ContagionModel::dcc(),
        stream(4, Stream::Simulation),
    );
    let mut flips = 0;
    for _ in 0..2000 {
        let (msg, _) = st.broadcast(0, b(6));
        assert!(st.has_processed(2, msg.uid) || st.graph().belief(2) != b(6));
        if st.graph().belief(2) == b(6) {
            flips += 1;
            break;
        }
    }
    assert_eq!(flips, 1);
}

#[test]
fn complex_contagion_follows_the_neighborhood() {
    // subscribers relay (half their neighbors hold 6), agent 2 adopts with 2 of
    // 3, and agent 3 then sees 2's new belief within the same tick
    let g = SocialGraph::from_edges(
        vec![b(6), b(6), b(1), b(0)],
        [(0, 1), (0, 2), (1, 2), (2, 3)],
    )
    .unwrap();
    let inst = Institution::with_subscribers(0, &g, b(6), 0);
    let schedule = MessageSchedule::single();
    let mut st = SimState::new(
        g,
        vec![inst],
        ContagionModel::Complex { alpha: 0.5 },
        stream(0, Stream::Simulation),
    );
    st.step(&schedule, 1).unwrap();
    assert_eq!(st.graph().beliefs(), &[b(6), b(6), b(6), b(6)]);
}
