//! Grammar to automaton.

use crate::automaton::{Pda, PdaBuilder, StackSym};
use crate::grammar::Grammar;

/// The three-state construction simulating leftmost derivations.
///
/// `q0` pushes the start symbol over the bottom marker, `q1` expands
/// nonterminals (one transition per production, in source order) and matches
/// terminals against the input, and `q2` is reached once only the bottom
/// marker is left. The bottom marker is `Z`, or `Z0`, `Z1`, ... when the
/// grammar already uses that name.
pub fn cfg_to_pda(g: &Grammar) -> Pda {
    let bottom = std::iter::once("Z".to_string())
        .chain((0..).map(|i| format!("Z{i}")))
        .find(|name| g.lookup(name).is_none())
        .expect("some marker name is free");

    let mut b = PdaBuilder::new();
    let q0 = b.state("q0");
    let q1 = b.state("q1");
    let q2 = b.state("q2");
    let z = b.stack_symbol(&bottom);
    let sym: Vec<StackSym> = g.symbols().iter().map(|s| b.stack_symbol(&s.name)).collect();
    for t in g.terminals() {
        b.input(g.name(t));
    }

    b.start(q0, z).accept(q2);
    b.transition(q0, None, z, vec![sym[g.start().0], z], q1, None);
    for (i, p) in g.productions().iter().enumerate() {
        let push = p.rhs.iter().map(|s| sym[s.0]).collect();
        b.transition(q1, None, sym[p.lhs.0], push, q1, Some(i));
    }
    for t in g.terminals() {
        let input = b.input(g.name(t));
        b.transition(q1, Some(input), sym[t.0], Vec::new(), q1, None);
    }
    b.transition(q1, None, z, vec![z], q2, None);
    b.build().expect("start and accept are set")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::load_pda;
    use crate::fixtures;
    use crate::grammar::parse_grammar;
    use proptest::prelude::*;

    fn all_words(alphabet: &[String], max: usize) -> Vec<Vec<String>> {
        let mut all = vec![vec![]];
        let mut layer: Vec<Vec<String>> = vec![vec![]];
        for _ in 0..max {
            layer = layer
                .iter()
                .flat_map(|w| {
                    alphabet.iter().map(move |x| {
                        let mut w = w.clone();
                        w.push(x.clone());
                        w
                    })
                })
                .collect();
            all.extend(layer.iter().cloned());
        }
        all
    }

    fn terminal_names(g: &Grammar) -> Vec<String> {
        g.terminals().map(|t| g.name(t).to_string()).collect()
    }

    fn assert_equivalent(g: &Grammar, max: usize) {
        let pda = cfg_to_pda(g);
        for w in all_words(&terminal_names(g), max) {
            assert_eq!(pda.accepts(&w).unwrap(), g.member(&w).unwrap(), "{w:?}");
        }
    }

    #[test]
    fn anbn_shape() {
        let g = parse_grammar(fixtures::ANBN_CFG).unwrap();
        let pda = cfg_to_pda(&g);
        assert_eq!(pda.states(), ["q0", "q1", "q2"]);
        let texts: Vec<String> = pda.transitions().iter().map(|t| pda.transition_text(t)).collect();
        assert_eq!(
            texts,
            [
                "(ε, Z; S Z)",
                "(ε, S; ε)",
                "(ε, S; a S b)",
                "(a, a; ε)",
                "(b, b; ε)",
                "(ε, Z; Z)"
            ]
        );
        let productions: Vec<Option<usize>> = pda.transitions().iter().map(|t| t.production).collect();
        assert_eq!(productions, [None, Some(0), Some(1), None, None, None]);
    }

    #[test]
    fn anbn_matches_hand_drawn_automaton() {
        let g = parse_grammar(fixtures::ANBN_CFG).unwrap();
        let built = cfg_to_pda(&g);
        let drawn = load_pda(fixtures::ANBN_PDA).unwrap();
        for w in all_words(&terminal_names(&g), 12) {
            assert_eq!(built.accepts(&w).unwrap(), drawn.accepts(&w).unwrap(), "{w:?}");
        }
    }

    #[test]
    fn openagi_plan_word_accepted() {
        let g = parse_grammar(fixtures::OPENAGI_CFG).unwrap();
        let pda = cfg_to_pda(&g);
        assert!(pda.accepts(&["e_1", "a_1", "i", "b_1", "i"]).unwrap());
        assert!(!pda.accepts(&["e_1", "a_1", "i"]).unwrap());
    }

    #[test]
    fn epsilon_only_grammar() {
        let g = parse_grammar("start S\nS -> eps").unwrap();
        let pda = cfg_to_pda(&g);
        assert!(pda.accepts::<&str>(&[]).unwrap());
        assert!(pda.input_alphabet().is_empty());
    }

    #[test]
    fn bottom_marker_avoids_grammar_names() {
        let g = parse_grammar("start S\nS -> Z | Z0 S").unwrap();
        let pda = cfg_to_pda(&g);
        assert_eq!(pda.stack_name(pda.initial_stack()), "Z1");
        assert!(pda.accepts(&["Z0", "Z"]).unwrap());
    }

    #[test]
    fn production_transitions_biject_with_productions() {
        for src in [fixtures::OPENAGI_CFG, fixtures::COOKING_CFG, fixtures::ANBN_CFG] {
            let g = parse_grammar(src).unwrap();
            let pda = cfg_to_pda(&g);
            let indices: Vec<usize> = pda.transitions().iter().filter_map(|t| t.production).collect();
            assert_eq!(indices, (0..g.productions().len()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn fixture_grammars_equivalent() {
        assert_equivalent(&parse_grammar(fixtures::ANBN_CFG).unwrap(), 6);
        assert_equivalent(&parse_grammar(fixtures::COOKING_CFG).unwrap(), 6);
        for src in [
            fixtures::OPENAGI_IMAGE_IMAGE_CFG,
            fixtures::OPENAGI_TEXT_TEXT_CFG,
            fixtures::OPENAGI_TEXT_IMAGE_CFG,
        ] {
            assert_equivalent(&parse_grammar(src).unwrap(), 3);
        }
    }

    /// Up to 4 nonterminals N0..N3 (N0 is the start), 3 terminals, 8 productions.
    fn random_grammar() -> impl Strategy<Value = Grammar> {
        let production = (0..4usize, proptest::collection::vec(0..7usize, 0..4));
        (1..=4usize, proptest::collection::vec(production, 1..=8)).prop_map(|(nts, prods)| {
            let name = |s: usize| {
                if s < 4 {
                    format!("N{}", s % nts)
                } else {
                    ["x", "y", "z"][s - 4].to_string()
                }
            };
            let mut prods: Vec<(String, Vec<String>)> = prods
                .into_iter()
                .map(|(l, r)| (format!("N{}", l % nts), r.into_iter().map(name).collect()))
                .collect();
            // every nonterminal needs a production to stay a nonterminal
            for n in 0..nts {
                let lhs = format!("N{n}");
                if !prods.iter().any(|(l, _)| *l == lhs) {
                    prods.push((lhs, vec!["x".to_string()]));
                }
            }
            Grammar::new("N0", prods).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]

        #[test]
        fn random_grammars_equivalent(g in random_grammar()) {
            let pda = cfg_to_pda(&g);
            let names = terminal_names(&g);
            for w in all_words(&names, 6) {
                prop_assert_eq!(pda.accepts(&w).unwrap(), g.member(&w).unwrap(), "{:?} on\n{}", w, g);
            }
        }
    }
}
