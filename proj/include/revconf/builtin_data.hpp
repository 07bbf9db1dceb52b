#ifndef REVCONF_BUILTIN_DATA_HPP
#define REVCONF_BUILTIN_DATA_HPP

namespace revconf::builtin {

// Contents of data/hedge_lexicon.txt, embedded at configure time.
const char* hedge_lexicon_text();

// Contents of data/aspect_rules.tsv, embedded at configure time.
const char* aspect_rules_text();

}  // namespace revconf::builtin

#endif  // REVCONF_BUILTIN_DATA_HPP
