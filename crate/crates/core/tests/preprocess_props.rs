use proptest::prelude::*;

use codemix::preprocess::{
    collapse_elongation, normalize_whitespace, remove_mentions, remove_non_ascii, replace_emoji, replace_urls, run_pipeline, segment_hashtags,
    EmojiLexicon, PipelineConfig,
};

/// Tweet-like text: words, mentions, hashtags, urls, emoticons, emoji,
/// accents and elongations.
fn tweet() -> impl Strategy<Value = String> {
    let piece = prop_oneof![
        "[a-zA-Z]{1,6}",
        ("[a-zA-Z]{0,2}", "[a-zA-Z]", 3..7usize).prop_map(|(head, c, n)| format!("{head}{}", c.repeat(n))),
        "@[a-z0-9_]{1,6}",
        "#[A-Za-z0-9_]{1,10}",
        "(www\\.)?[a-z]{1,5}\\.(com|es|ly)(/[a-z]{0,3})?",
        "https?://[a-z./]{1,8}",
        prop::sample::select(vec!["<3", ":)", ":(", "XD", ";)", ":D", ",", "😂", "❤️", "☕", "🙏🏽", "ñ", "é", "¿", "…"]).prop_map(String::from),
    ];
    prop::collection::vec((piece, prop::sample::select(vec![" ", "  ", "", "\t"])), 0..10)
        .prop_map(|parts| parts.into_iter().map(|(p, s)| format!("{p}{s}")).collect())
}

fn any_config() -> impl Strategy<Value = PipelineConfig> {
    (any::<[bool; 6]>(), 2..5usize).prop_map(|(b, min_run)| PipelineConfig {
        replace_emoji: b[0],
        remove_mentions: b[1],
        replace_urls: b[2],
        collapse_elongation: b[3],
        segment_hashtags: b[4],
        remove_non_ascii: b[5],
        elongation_min_run: min_run,
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn rules_are_idempotent(text in tweet(), min_run in 2..5usize) {
        let lex = EmojiLexicon::bundled();
        let rules: [(&str, Box<dyn Fn(&str) -> String>); 6] = [
            ("emoji", Box::new(|t| replace_emoji(t, &lex))),
            ("mentions", Box::new(remove_mentions)),
            ("urls", Box::new(replace_urls)),
            ("elongation", Box::new(move |t| collapse_elongation(t, min_run))),
            ("hashtags", Box::new(segment_hashtags)),
            ("non_ascii", Box::new(remove_non_ascii)),
        ];
        for (name, rule) in &rules {
            let once = rule(&text);
            prop_assert_eq!(rule(&once), once.clone(), "rule {}", name);
        }
    }

    #[test]
    fn pipeline_is_idempotent(text in tweet(), cfg in any_config()) {
        let lex = EmojiLexicon::bundled();
        let once = run_pipeline(&text, &cfg, &lex);
        prop_assert_eq!(run_pipeline(&once, &cfg, &lex), once);
    }

    #[test]
    fn output_is_ascii_and_mention_free(text in tweet()) {
        let out = run_pipeline(&text, &PipelineConfig::default(), &EmojiLexicon::bundled());
        prop_assert!(out.is_ascii(), "{:?}", out);
        prop_assert!(out.split(' ').all(|t| !t.starts_with('@')), "{:?}", out);
        prop_assert_eq!(normalize_whitespace(&out), out);
    }

    #[test]
    fn identity_config_only_normalises_whitespace(text in tweet()) {
        let out = run_pipeline(&text, &PipelineConfig::identity(), &EmojiLexicon::bundled());
        prop_assert_eq!(out, normalize_whitespace(&text));
    }
}

#[test]
fn rules_in_isolation() {
    let lex = EmojiLexicon::bundled();
    assert_eq!(replace_emoji("<3<3", &lex), "heart heart");
    assert_eq!(replace_emoji("", &lex), "");
    assert_eq!(collapse_elongation("soooo cooool", 3), "so col");
    assert_eq!(collapse_elongation("good", 3), "good");
    assert_eq!(segment_hashtags("#top10Hits_2020"), "top 10 Hits 2020");
    assert_eq!(segment_hashtags("#hello"), "hello");
}
