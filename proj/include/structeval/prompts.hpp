#pragma once

// Prompt templates for direct conversion, judge validation and synthetic
// data generation, plus the judge-verdict parser.
//
// Templates use Python str.format conventions: `{name}` is a slot, `{{` and
// `}}` are literal braces. Newlines are always LF.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "structeval/dataset.hpp"
#include "structeval/errors.hpp"
#include "structeval/json.hpp"

namespace structeval {

inline constexpr std::string_view kConversionTemplate =
    "Convert the following text into JSON format according to the specified schema. "
    "Ensure that both keys and values are strings, even for numerical values.\n"
    "\n"
    "Text: {input_text}\n"
    "\n"
    "Provide your response in the following JSON format: {json_schema}\n"
    "\n"
    "Please output ONLY the JSON structure and extract the attributes only present in the schema.\n"
    "\n"
    "Output:";

inline constexpr std::string_view kValidationTemplate =
    "Be an impartial judge to identify whether the structured data accurately reflect the input text. "
    "If the structured data contains anything that unsupported by the `input_text', return False. "
    "If everything can be found or inferred from the input text, return True. "
    "Enclose your answer in <validity></validity> xml tags.\n"
    "\n"
    "<input_text>{input_text}</input_text>\n"
    "\n"
    "<structured_data>{gold}</structured_data>\n"
    "\n"
    "Your answer:";

inline constexpr std::string_view kGenerationTemplate = R"TPL(You are an advanced AI assistant specialized in data augmentation for text-to-JSON conversion tasks. Your goal is to generate diverse and high-quality input-output pairs that will be used to train machine learning models for structured information extraction.

First, review these examples of input-output pairs:

<examples>{examples}</examples>

Your task is to generate 3 additional input-output pairs in JSONL format. Each pair should consist of:
1. Input:
   - A text description
   - A desired JSON schema with a brief explanation
2. Output:
   - The text converted into JSON following the given schema

Please adhere to the following specifications:

<industry_vertical>{industry_vertical}</industry_vertical>
<genre>{genre}</genre>
<json_complexity_description>{json_complexity_description}</json_complexity_description>
<text_length_style>{text_length_style}</text_length_style>
<text_type>{text_type}</text_type>

Before generating each pair, wrap your thought process in <planning> tags. Consider the following:

1. Industry relevance: How can you make the text diverse and representative of the specified industry - *{industry_vertical}*?
   - List 1-5 key topics or scenarios relevant to the industry.
   - Consider how these topics can be incorporated into the text descriptions.
2. JSON schema complexity: How can you adhere to the complexity level of the JSON schema - *{json_complexity_description}*, while staying within the other given constraints?
   - Brainstorm 1-5 different schema structures of such complexity.
   - Ensure each schema adheres to the complexity description and other constraints provided.
3. Text length adherence: How can you ensure the text length adheres to the specified style - *{text_length_style}*?
   - Outline a strategy for maintaining consistent text length across all pairs.
   - Consider using a word count check for each generated text.
4. Unique aspects and edge cases: What unique aspects or edge cases can you incorporate to make the training data more robust?
   - List 2-3 potential edge cases or unusual scenarios relevant to the industry.
   - Plan how to integrate these into some of the pairs.
5. Diversity tracking: How will you ensure diversity across all 5 pairs?
   - Create a simple tracking system to ensure you're varying topics, schema complexity, and text length across the pairs.
   - Number each pair as you plan it (1/5, 2/5, etc.) to keep track of your progress.
6. JSON content alignment: How will you ensure the gold JSON only contains information present in the input text?
   - Implement a strict check to verify that every piece of information in the gold JSON can be directly traced back to the input text.
   - Plan a review process to eliminate any potential extra content in the gold JSON that is not explicitly stated in the input text.
7. Genre: Ensure that the generated text adheres to the specified genre *{genre}*. This will influence the tone, style, and content of the `input_text`, but does not affect the JSON structure.
8. Text Type: Generate text that aligns with the specified text type *{text_type}*. This will determine the format, structure, or purpose of the `input_text` you create, separate from the JSON output.
9. Follow the format in the example below for your `input_text`, 'json_schema` and `gold`:

{{
    "input_text": "Acme Motors, a major automaker has announced plans to build a new electric vehicle manufacturing plant in Greenville, South Carolina. The state-of-the-art facility will produce the company's latest line of battery-powered cars and SUVs, with an initial annual capacity of 200,000 units.",
    "json_schema": {{
        "type": "object",
        "properties": {{
            "company": {{
                "type": "string"
            }},
            "location": {{
                "type": "string"
            }},
            "production_capacity": {{
                "type": "number"
            }}
        }}
    }},
    "gold": {{
        "company": "Acme Motors",
        "location": "Greenville, South Carolina",
        "production_capacity": 200000
    }}
}}

Notes:
- "input_text": Contains a string value, represents the raw text input that needs to be processed
In this case, it's a news-like paragraph about a company announcement.
- "json_schema": Defines the structure of the expected output. must include "type" and "properties", defined as below:
"type": "object" - specifies that the output should be a JSON object
"properties" - defines the expected fields:
   - "company": expects a string value
   - "location": expects a string value
   - "production_capacity": expects a number value
Each property has its own type definition
- "gold": Contains the correct/expected output that matches the schema. Has the exact same structure as defined in json_schema. Contains the actual values extracted from the input_text:
   - "company": contains the company name
   - "location": contains the city and state
   - "production_capacity": contains the numerical value
Values must match the types specified in the schema (strings for company and location, number for production_capacity)
- *IMPORTANT* Do not replicate any of the content in the given example, it's just used as a reference for a specified answer structure.

After your planning process, generate the input-output pair and format it in JSONL. Here's an example of the expected format:

{{"input_text": "Your generated text here", "json_schema": {{"Your": "JSON", "schema": "here"}}, "gold": {{"Your": "gold", "JSON": "here"}}}}

Remember to generate 5 unique and diverse pairs, each following this format. Ensure that each pair adheres to the industry vertical, complexity description, and text length style specified above. EACH response should be enclosed in <JSONL> </JSONL> XML tags.)TPL";

/// Fills `{name}` slots from `values` in a single pass; substituted text is
/// never re-scanned. `{{` / `}}` emit literal braces. An unknown slot or an
/// unbalanced brace throws std::invalid_argument.
inline std::string render_template(std::string_view tmpl, const std::map<std::string, std::string, std::less<>>& values) {
    std::string out;
    out.reserve(tmpl.size());
    for (std::size_t i = 0; i < tmpl.size(); ++i) {
        const char c = tmpl[i];
        if (c == '{') {
            if (i + 1 < tmpl.size() && tmpl[i + 1] == '{') {
                out.push_back('{');
                ++i;
                continue;
            }
            const auto close = tmpl.find('}', i + 1);
            if (close == std::string_view::npos) throw std::invalid_argument("unterminated template slot");
            const auto name = tmpl.substr(i + 1, close - i - 1);
            auto it = values.find(name);
            if (it == values.end()) throw std::invalid_argument("no value for template slot {" + std::string(name) + "}");
            out += it->second;
            i = close;
        } else if (c == '}') {
            if (i + 1 < tmpl.size() && tmpl[i + 1] == '}') {
                out.push_back('}');
                ++i;
                continue;
            }
            throw std::invalid_argument("unbalanced '}' in template");
        } else {
            out.push_back(c);
        }
    }
    return out;
}

/// Direct-prompting request for converting `input_text` under `json_schema`.
inline std::string build_conversion_prompt(std::string_view input_text, const JsonValue& json_schema) {
    return render_template(kConversionTemplate, {
                                                    {"input_text", std::string(input_text)},
                                                    {"json_schema", serialize_canonical(json_schema)},
                                                });
}

/// Judge request asking whether the gold output is supported by the input text.
inline std::string build_validation_prompt(const DatasetRecord& record) {
    return render_template(kValidationTemplate, {
                                                    {"input_text", record.input_text},
                                                    {"gold", serialize_canonical(record.gold)},
                                                });
}

/// Extracts the verdict from the first `<validity>...</validity>` span.
/// Content is trimmed and compared case-insensitively against true/false;
/// anything else (including a missing tag) yields std::nullopt.
inline std::optional<bool> parse_validity(std::string_view response) {
    constexpr std::string_view kOpen = "<validity>";
    constexpr std::string_view kClose = "</validity>";
    const auto open = response.find(kOpen);
    if (open == std::string_view::npos) return std::nullopt;
    const auto body_start = open + kOpen.size();
    const auto close = response.find(kClose, body_start);
    if (close == std::string_view::npos) return std::nullopt;
    std::string body;
    for (char c : response.substr(body_start, close - body_start)) {
        body.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c);
    }
    const auto first = body.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return std::nullopt;
    const auto last = body.find_last_not_of(" \t\r\n");
    const std::string_view verdict = std::string_view(body).substr(first, last - first + 1);
    if (verdict == "true") return true;
    if (verdict == "false") return false;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Generation specs
// ---------------------------------------------------------------------------

/// Value lists for the five diversity dimensions.
struct GenerationCatalog {
    std::vector<std::string> industry_verticals;
    std::vector<std::string> json_complexities;
    std::vector<std::string> text_length_styles;
    std::vector<std::string> genres;
    std::vector<std::string> text_types;
};

struct GenerationSpec {
    std::string industry_vertical;
    std::string json_complexity;
    std::string text_length_style;
    std::string genre;
    std::string text_type;
    std::vector<DatasetRecord> demonstrations;  // 1 to 3
    double temperature = 0.0;                   // [0, 0.5]
};

inline constexpr double kMaxGenerationTemperature = 0.5;

namespace detail {

inline std::vector<std::string> catalog_list(const JsonValue& raw, std::string_view key) {
    const JsonValue* list = raw.find(key);
    if (list == nullptr || !list->is_array()) throw CatalogError("catalog field \"" + std::string(key) + "\" must be an array");
    std::vector<std::string> out;
    for (const auto& v : list->as_array()) {
        if (!v.is_string()) throw CatalogError("catalog field \"" + std::string(key) + "\" must hold strings");
        out.push_back(v.as_string());
    }
    return out;
}

}  // namespace detail

/// Reads a catalog object with the keys industry_verticals, json_complexities,
/// text_length_styles, genres and text_types.
inline GenerationCatalog parse_catalog(const JsonValue& raw) {
    if (!raw.is_object()) throw CatalogError("catalog must be a JSON object");
    return GenerationCatalog{
        detail::catalog_list(raw, "industry_verticals"), detail::catalog_list(raw, "json_complexities"),
        detail::catalog_list(raw, "text_length_styles"), detail::catalog_list(raw, "genres"),
        detail::catalog_list(raw, "text_types"),
    };
}

/// Small illustrative catalog. Not the dimension lists used to build any
/// published training set; load a real catalog from configuration for that.
inline GenerationCatalog default_catalog() {
    return GenerationCatalog{
        {"Healthcare", "Financial Services", "Retail", "Manufacturing", "Education", "Software"},
        {"Basic (3-5 key-value pairs)", "Moderate (one nested object)", "Nested (two levels of objects)",
         "Comprehensive (multiple nested objects)"},
        {"Brief Snippets (15-30 words)", "Short Paragraph (30-80 words)", "Medium (80-200 words)",
         "Extended (200-300 words)"},
        {"News article", "Technical report", "Product review", "Email", "Meeting notes"},
        {"Bullet points", "Code snippets", "Dialogue", "Narrative prose", "Table-like listing"},
    };
}

/// Draws one value per dimension, 1-3 distinct demonstrations from `pool`,
/// and a temperature in [0, 0.5). Identical seed, catalog and pool give an
/// identical spec on every platform: only the mt19937_64 bit stream is used,
/// never the implementation-defined standard distributions.
inline GenerationSpec sample_generation_spec(const GenerationCatalog& catalog, const std::vector<DatasetRecord>& pool,
                                             std::uint64_t seed) {
    const std::pair<const std::vector<std::string>*, std::string_view> dims[] = {
        {&catalog.industry_verticals, "industry_verticals"}, {&catalog.json_complexities, "json_complexities"},
        {&catalog.text_length_styles, "text_length_styles"}, {&catalog.genres, "genres"},
        {&catalog.text_types, "text_types"},
    };
    for (const auto& [list, name] : dims) {
        if (list->empty()) throw CatalogError("catalog dimension \"" + std::string(name) + "\" is empty");
    }
    if (pool.empty()) throw CatalogError("no demonstration records to sample from");

    std::mt19937_64 rng(seed);
    const auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };

    GenerationSpec spec;
    spec.industry_vertical = catalog.industry_verticals[pick(catalog.industry_verticals.size())];
    spec.json_complexity = catalog.json_complexities[pick(catalog.json_complexities.size())];
    spec.text_length_style = catalog.text_length_styles[pick(catalog.text_length_styles.size())];
    spec.genre = catalog.genres[pick(catalog.genres.size())];
    spec.text_type = catalog.text_types[pick(catalog.text_types.size())];

    const std::size_t count = std::min<std::size_t>(1 + pick(3), pool.size());
    std::vector<std::size_t> order(pool.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (std::size_t i = 0; i < count; ++i) {
        std::swap(order[i], order[i + pick(order.size() - i)]);
        spec.demonstrations.push_back(pool[order[i]]);
    }

    // 53 random bits -> [0, 1), scaled into [0, 0.5).
    spec.temperature = static_cast<double>(rng() >> 11) * 0x1.0p-53 * kMaxGenerationTemperature;
    return spec;
}

/// One JSONL line per demonstration, in the input_text / json_schema / gold layout.
inline std::string format_demonstrations(const std::vector<DatasetRecord>& demos) {
    std::string out = "\n";
    for (const auto& d : demos) {
        out += serialize_canonical(JsonValue::object({
            {"input_text", d.input_text},
            {"json_schema", d.json_schema},
            {"gold", d.gold},
        }));
        out += '\n';
    }
    return out;
}

inline std::string build_generation_prompt(const GenerationSpec& spec) {
    return render_template(kGenerationTemplate, {
                                                    {"examples", format_demonstrations(spec.demonstrations)},
                                                    {"industry_vertical", spec.industry_vertical},
                                                    {"json_complexity_description", spec.json_complexity},
                                                    {"text_length_style", spec.text_length_style},
                                                    {"genre", spec.genre},
                                                    {"text_type", spec.text_type},
                                                });
}

}  // namespace structeval
