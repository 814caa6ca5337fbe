#include "nep/model_config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nep/errors.hpp"

namespace nep {

NonlinearModel parse_model_config(std::string_view json_text)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::parse, std::string("model config: ") + e.what());
    }
    if (!doc.contains("name") || !doc.contains("f")) {
        throw Error(ErrorCode::parse, "model config needs 'name' and 'f'");
    }
    std::optional<double> tail;
    if (doc.contains("tail_mass") && !doc["tail_mass"].is_null()) {
        tail = doc["tail_mass"].get<double>();
    }
    bool integrable = doc.value("integrable_at_minus_infinity", false);
    if (tail && !integrable) {
        throw Error(ErrorCode::model_definition, "tail_mass given for a model not integrable at -inf");
    }
    NonlinearModel m = expression_model(doc["name"].get<std::string>(), doc["f"].get<std::string>(),
                                        integrable, tail);
    if (doc.contains("valid_lower_bound")) {
        m.valid_lower_bound = doc["valid_lower_bound"].get<double>();
    }
    validate_model(m, std::max(-10.0, m.valid_lower_bound), 10.0);
    return m;
}

NonlinearModel load_model_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::io, "cannot open model config " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_model_config(ss.str());
}

}  // namespace nep
