use super::*;

fn lit(v: bool) -> BoolExpr {
    BoolExpr::Lit(v)
}

fn names(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn instance(params: KParams, n: u32, content: TaskContent) -> TaskInstance {
    TaskInstance::from_content(ComplexitySpec::new(params, n), content, 0).expect("worked example builds")
}

fn assert_solved(inst: &TaskInstance, want: Answer) {
    assert_eq!(inst.ground_truth, want, "ground truth");
    assert_eq!(oracle_solve(inst).unwrap(), want, "oracle");
}

fn index_example() -> TaskInstance {
    instance(
        KParams::IndexTracking { k_s: 9, k_m: 9 },
        10,
        TaskContent::PointerWalk { increments: vec![9, -18, -9, 36, -63, 54, 27, -63, 63, -18] },
    )
}

#[test]
fn index_tracking_worked_example() {
    let inst = index_example();
    assert_solved(&inst, Answer::Integer(18));
    let expected = "You are a smart and helpful AI assistant. Please help me with the following task.

You are given a length-81 array and must track the index of a 0-indexed pointer to the array. The pointer undergoes several modifications. The pointer wraps around the length of the array on both ends, so when it reaches 81 it becomes 0, when it reaches 82 it becomes 1, when it reaches -1 it becomes 80, etc. What is the index of the pointer after all the modifications are complete? Provide the answer in the range [0, 81).

pointer = 0
pointer = pointer + 9
pointer = pointer - 18
pointer = pointer - 9
pointer = pointer + 36
pointer = pointer - 63
pointer = pointer + 54
pointer = pointer + 27
pointer = pointer - 63
pointer = pointer + 63
pointer = pointer - 18

Provide your final answer following this template: [ANSWER]
pointer == YOUR ANSWER
[/ANSWER]";
    assert_eq!(inst.prompt, expected);
}

#[test]
fn even_odd_worked_example() {
    let inst = instance(
        KParams::EvenOddTracking { k_s: 17 },
        10,
        TaskContent::PointerWalk { increments: vec![13, 7, -7, -5, -12, 6, 15, -16, 8, 13] },
    );
    assert_solved(&inst, Answer::Boolean(false));
    let run = inst.dfa.execute_run(&inst.input).unwrap();
    assert_eq!(run.final_state(), 5);
    assert!(!inst.dfa.accepts(&inst.input).unwrap());
    assert!(inst.prompt.contains(
        "After all the modifications are complete, is the final pointer index even?\n\npointer = 0\npointer = pointer + 13\n"
    ));
}

#[test]
fn navigate_worked_example() {
    use Direction::{Left, Right};
    let moves = vec![Move::new(90, Left), Move::new(146, Right), Move::new(39, Left), Move::new(10, Right), Move::new(27, Left)];
    let inst = instance(KParams::Navigate { k_d: 2, k_s: 100 }, 5, TaskContent::Navigate { moves });
    assert_solved(&inst, Answer::Boolean(true));
    let expected = "You are a smart and helpful AI assistant. Please help me with the following task.

If you follow these instructions, do you return to the starting point? Always face forward. 

Take 90 steps left. Take 146 steps right. Take 39 steps left. Take 10 steps right. Take 27 steps left.

Provide your final answer as True or False, following this template: [ANSWER]
returned_to_start == YOUR ANSWER
[/ANSWER]";
    assert_eq!(inst.prompt, expected);
}

#[test]
fn nested_boolean_worked_example() {
    let left = BoolExpr::or(BoolExpr::or(lit(false), lit(false)), BoolExpr::and(lit(true), lit(true)));
    let right = BoolExpr::and(BoolExpr::and(lit(true), lit(true)), BoolExpr::and(lit(false), lit(true)));
    let inst = instance(
        KParams::NestedBoolean { operators: 4 },
        3,
        TaskContent::NestedBoolean { expr: BoolExpr::and(left, right) },
    );
    assert_solved(&inst, Answer::Boolean(false));
    assert!(inst.prompt.contains(
        "Evaluate the following boolean expression:\n\ntruth_value = ((False or False) or (True and True)) and ((True and True) and (False and True))\n\n"
    ));
    assert!(inst.prompt.ends_with("truth_value == YOUR ANSWER\n[/ANSWER]"));
}

#[test]
fn dyck_worked_examples() {
    let text = "<>[]<>{}{}{<>}{{}}";
    let inst = instance(KParams::Dyck { depth: 2, types: 4 }, 18, TaskContent::Dyck { text: text.into() });
    assert_solved(&inst, Answer::Boolean(true));
    assert!(inst.prompt.contains("Input: <>[]<>{}{}{<>}{{}}\n\n"));

    let deep = "{{{{}}{}}{}{}}{}{}{}";
    let inst = instance(KParams::Dyck { depth: 4, types: 3 }, 20, TaskContent::Dyck { text: deep.into() });
    assert_solved(&inst, Answer::Boolean(true));
    // the verdict does not depend on how the declared depth bound is chosen
    let wide = instance(KParams::Dyck { depth: 6, types: 4 }, 20, TaskContent::Dyck { text: deep.into() });
    assert_eq!(wide.ground_truth, Answer::Boolean(true));
    assert!(inst.prompt.ends_with(
        "Provide your final answer as True or False, following this template: [ANSWER]\nis_balanced == YOUR ANSWER\n[/ANSWER]"
    ));
}

#[test]
fn arithmetic_worked_example() {
    use ArithOp::{Mul, Sub};
    let groups = vec![
        ArithGroup { atoms: [3, 3, 1, 0], ops: [Sub, Sub, Mul] },
        ArithGroup { atoms: [3, 4, 1, 4], ops: [Sub, Sub, Mul] },
    ];
    let inst = instance(
        KParams::MultiStepArithmetic { range: 5, operators: 2 },
        2,
        TaskContent::Arithmetic { groups, joins: vec![Mul] },
    );
    // (3 - 3 - 0) * (3 - 4 - 4)
    assert_solved(&inst, Answer::Integer(0));
    assert!(inst.prompt.contains("answer = (3 - 3 - 1 * 0) * (3 - 4 - 1 * 4)\n\n"));
}

#[test]
fn shuffled_objects_worked_example() {
    let inst = instance(
        KParams::ShuffledObjects { objects: 5 },
        3,
        TaskContent::Shuffled {
            people: names(&["Claire", "Bob", "Izzi", "Lola", "Ophelia"]),
            positions: names(&["striker", "left winger", "goalkeeper", "fullback", "right winger"]),
            swaps: vec![(1, 2), (2, 1), (4, 2)],
            query: 1,
        },
    );
    assert_solved(&inst, Answer::Text("left winger".into()));
    let expected = "You are a smart and helpful AI assistant. Please help me with the following task.

Claire, Bob, Izzi, Lola, and Ophelia are on the same team in a soccer match. At the start of the match, they are each assigned to a position: Claire is playing striker, Bob is playing left winger, Izzi is playing goalkeeper, Lola is playing fullback, and Ophelia is playing right winger.
As the game progresses, pairs of players occasionally swap positions.  First, Bob and Izzi trade positions. Then, Izzi and Bob trade positions. Finally, Ophelia and Izzi trade positions.
At the end of the match, what position is Bob playing?
Provide your final answer following this template: [ANSWER]
Answer: YOUR ANSWER
[/ANSWER]";
    assert_eq!(inst.prompt, expected);
}

#[test]
fn web_of_lies_worked_example() {
    let inst = instance(
        KParams::WebOfLies { people: 5 },
        5,
        TaskContent::WebOfLies {
            people: names(&["Ka", "Jamey", "Delbert", "Millicent", "Fletcher"]),
            first_truthful: true,
            claims: vec![false, false, true, true],
        },
    );
    assert_solved(&inst, Answer::Boolean(true));
    let expected = "You are a smart and helpful AI assistant. Please help me with the following task.

Question: Ka tells the truth. Jamey says Ka lies. Delbert says Jamey lies. Millicent says Delbert tells the truth. Fletcher says Millicent tells the truth. Does Fletcher tell the truth?
Provide your final answer as Yes or No, following this template: [ANSWER]
Answer: YOUR ANSWER
[/ANSWER]";
    assert_eq!(inst.prompt, expected);
}

const DEDUCTION_PROMPT: &str = "You are a smart and helpful AI assistant. Please help me with the following task.

The following is a logical deduction task which requires deducing the order of a sequence of objects.

The following sentences each describe a set of nine objects arranged in a fixed order. The statements are logically consistent within each paragraph. A fruit stand sells nine fruits: loquats, peaches, blackberries, oranges, apples, guavas, cherries, raspberries, and kiwis. loquats are two dollars more expensive than oranges. The apples are fourth-most expensive. guavas are three dollars more expensive than loquats. peaches are six dollars cheaper than guavas. blackberries are two dollars more expensive than cherries. kiwis are four dollars cheaper than guavas. oranges are two dollars cheaper than loquats. raspberries are one dollars cheaper than peaches. The cherries are third-most expensive. Which fruits are most expensive?
Provide your final answer following this template: [ANSWER]
Answer: YOUR ANSWER
[/ANSWER]";

#[test]
fn logical_deduction_worked_example() {
    let objects = names(&[
        "loquats", "peaches", "blackberries", "oranges", "apples", "guavas", "cherries", "raspberries", "kiwis",
    ]);
    let off = |subject, dollars, pricier, other| Statement::Offset { subject, other, dollars, pricier };
    let statements = vec![
        off(0, 2, true, 3),
        Statement::Rank { object: 4, rank: 4 },
        off(5, 3, true, 0),
        off(1, 6, false, 5),
        off(2, 2, true, 6),
        off(8, 4, false, 5),
        off(3, 2, false, 0),
        off(7, 1, false, 1),
        Statement::Rank { object: 6, rank: 3 },
    ];
    let inst = instance(
        KParams::LogicalDeduction { objects: 9 },
        2,
        TaskContent::Deduction { objects, statements, query_rank: 1 },
    );
    assert_solved(&inst, Answer::Text("blackberries".into()));
    assert_eq!(inst.prompt, DEDUCTION_PROMPT);
    assert_eq!(
        oracle_solve_prompt(TaskKind::LogicalDeduction, DEDUCTION_PROMPT).unwrap(),
        Answer::Text("blackberries".into())
    );
}

#[test]
fn generators_agree_with_oracle_across_grids() {
    for kind in TaskKind::ALL {
        for spec in default_grid(kind) {
            for seed in 0..12 {
                let inst = generate_instance(&spec, seed).unwrap_or_else(|e| panic!("{spec} seed {seed}: {e}"));
                let solved = oracle_solve(&inst).unwrap_or_else(|e| panic!("{spec} seed {seed}: {e}\n{}", inst.prompt));
                assert_eq!(solved, inst.ground_truth, "{spec} seed {seed}\n{}", inst.prompt);
            }
        }
    }
}

#[test]
fn runs_have_declared_length_and_decode_to_truth() {
    for kind in TaskKind::ALL {
        for spec in default_grid(kind) {
            let inst = generate_instance(&spec, 7).unwrap();
            assert_eq!(inst.input.len(), spec.n as usize, "{spec}");
            let run = inst.dfa.execute_run(&inst.input).unwrap();
            assert_eq!(run.run_length(), spec.n as usize);
            assert_eq!(inst.state_answers.len(), inst.dfa.state_count());
            assert_eq!(inst.state_answers[run.final_state()].as_ref(), Some(&inst.ground_truth));
            assert_eq!(inst.ground_truth.domain(), kind.answer_domain());
            assert!(inst.prompt.starts_with(PREAMBLE));
            assert!(inst.prompt.ends_with(&inst.answer_template));
        }
    }
}

#[test]
fn generation_is_deterministic_and_seed_sensitive() {
    for kind in TaskKind::ALL {
        let spec = *default_grid(kind).last().unwrap();
        let a = generate_instance(&spec, 42).unwrap();
        let b = generate_instance(&spec, 42).unwrap();
        assert_eq!(a, b);
        let distinct = (0..8).map(|s| generate_instance(&spec, s).unwrap().prompt).collect::<std::collections::HashSet<_>>();
        assert!(distinct.len() > 1, "{kind} prompts do not vary with the seed");
    }
}

#[test]
fn index_tracking_reaches_at_most_k_s_slots() {
    let spec = ComplexitySpec::new(KParams::IndexTracking { k_s: 9, k_m: 9 }, 24);
    for seed in 0..20 {
        let inst = generate_instance(&spec, seed).unwrap();
        let reach = inst.dfa.reachable_states();
        assert!(reach.len() <= 9);
        assert!(reach.iter().all(|q| q % 9 == 0));
        if inst.dfa.alphabet().iter().any(|s| s == "+9" || s == "-9") {
            assert_eq!(reach.len(), 9);
        }
    }
    // the worked example steps by 9 so every slot of the coarse grid is reachable
    assert_eq!(index_example().dfa.reachable_states().len(), 9);
}

#[test]
fn chance_levels() {
    let spec = |p, n| ComplexitySpec::new(p, n);
    assert!((random_guess_accuracy(&spec(KParams::IndexTracking { k_s: 9, k_m: 9 }, 4)) - 1.0 / 81.0).abs() < 1e-12);
    assert_eq!(random_guess_accuracy(&spec(KParams::Navigate { k_d: 1, k_s: 3 }, 4)), 0.5);
    assert_eq!(random_guess_accuracy(&spec(KParams::ShuffledObjects { objects: 5 }, 4)), 0.2);
    assert_eq!(random_guess_accuracy(&spec(KParams::WebOfLies { people: 4 }, 4)), 0.5);
}

#[test]
fn instance_line_roundtrips_through_json() {
    let spec = ComplexitySpec::new(KParams::Dyck { depth: 2, types: 3 }, 8);
    let inst = generate_instance(&spec, 3).unwrap();
    let json = serde_json::to_string(&inst.to_line()).unwrap();
    let v: Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["kind"], "dyck");
    assert_eq!(v["k_params"], serde_json::json!({"depth": 2, "types": 3}));
    assert_eq!(v["scalar_k"], 6);
    assert_eq!(v["answer"]["type"], "boolean");
    let line: InstanceLine = serde_json::from_str(&json).unwrap();
    assert_eq!(line.regenerate().unwrap(), inst);
}

#[test]
fn complexity_serde_and_parsing() {
    let spec: ComplexitySpec =
        serde_json::from_str(r#"{"kind":"index_tracking","k_params":{"k_s":3,"k_m":9},"n":4}"#).unwrap();
    assert_eq!(spec, ComplexitySpec::new(KParams::IndexTracking { k_s: 3, k_m: 9 }, 4));
    assert!(serde_json::from_str::<ComplexitySpec>(r#"{"kind":"dyck","k_params":{"depth":2},"n":4}"#).is_err());
    assert!(serde_json::from_str::<ComplexitySpec>(r#"{"kind":"dyck","k_params":{"depth":2,"types":1,"x":0},"n":4}"#)
        .is_err());
    assert_eq!("web-of-lies".parse::<TaskKind>().unwrap(), TaskKind::WebOfLies);
    assert!("cruxeval".parse::<TaskKind>().is_err());
}

#[test]
fn invalid_complexities_are_rejected() {
    let gen = |p, n| generate_instance(&ComplexitySpec::new(p, n), 0);
    assert!(matches!(gen(KParams::Dyck { depth: 2, types: 2 }, 7), Err(TaskError::Unsatisfiable(_))));
    assert!(matches!(gen(KParams::WebOfLies { people: 4 }, 5), Err(TaskError::Unsatisfiable(_))));
    assert!(matches!(gen(KParams::LogicalDeduction { objects: 4 }, 5), Err(TaskError::Unsatisfiable(_))));
    assert!(matches!(gen(KParams::ShuffledObjects { objects: 8 }, 3), Err(TaskError::InvalidSpec(_))));
    assert!(matches!(gen(KParams::IndexTracking { k_s: 1, k_m: 3 }, 3), Err(TaskError::InvalidSpec(_))));
    assert!(matches!(gen(KParams::Navigate { k_d: 4, k_s: 3 }, 3), Err(TaskError::InvalidSpec(_))));
    assert!(matches!(gen(KParams::NestedBoolean { operators: 3 }, 0), Err(TaskError::InvalidSpec(_))));
}

#[test]
fn content_of_the_wrong_kind_is_rejected() {
    let spec = ComplexitySpec::new(KParams::Dyck { depth: 2, types: 1 }, 2);
    let err = TaskInstance::from_content(spec, TaskContent::PointerWalk { increments: vec![1, 2] }, 0);
    assert!(matches!(err, Err(TaskError::ContentMismatch(_))));
    // declared n disagrees with the content's run length
    let spec = ComplexitySpec::new(KParams::Dyck { depth: 2, types: 1 }, 4);
    assert!(TaskInstance::from_content(spec, TaskContent::Dyck { text: "()".into() }, 0).is_err());
}

#[test]
fn oracle_reports_unparseable_prompts() {
    for kind in TaskKind::ALL {
        assert!(oracle_solve_prompt(kind, "nothing to see here").is_err(), "{kind}");
    }
}

#[test]
fn dyck_instances_mix_verdicts() {
    let spec = ComplexitySpec::new(KParams::Dyck { depth: 3, types: 2 }, 12);
    let trues = (0..200).filter(|&s| generate_instance(&spec, s).unwrap().ground_truth == Answer::Boolean(true)).count();
    assert!((40..160).contains(&trues), "{trues} balanced of 200");
}

#[test]
fn navigate_instances_mix_verdicts() {
    let spec = ComplexitySpec::new(KParams::Navigate { k_d: 2, k_s: 10 }, 6);
    let trues = (0..200).filter(|&s| generate_instance(&spec, s).unwrap().ground_truth == Answer::Boolean(true)).count();
    assert!((40..160).contains(&trues), "{trues} closed walks of 200");
}
