#include "gridfc/mps.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

namespace gridfc::lp {

namespace {

bool mps_safe(const std::string& name) {
    if (name.empty() || name.size() > 8) return false;
    for (char c : name)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.')) return false;
    return true;
}

std::string padded(const std::string& s, std::size_t width) {
    std::string out = s;
    if (out.size() < width) out.append(width - out.size(), ' ');
    return out;
}

std::string sequential_name(char prefix, int index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%c%07d", prefix, index + 1);
    return buf;
}

std::string field_line(const std::string& f1, const std::string& f2, const std::string& f3,
                       const std::string& f4 = "", const std::string& f5 = "",
                       const std::string& f6 = "") {
    std::string line = " " + padded(f1, 2) + " " + padded(f2, 9) + " " + padded(f3, 9);
    if (!f4.empty()) line += " " + padded(f4, 14);
    if (!f5.empty()) line += " " + padded(f5, 9);
    if (!f6.empty()) line += " " + f6;
    while (!line.empty() && line.back() == ' ') line.pop_back();
    return line + "\n";
}

} // namespace

std::string MpsDocument::name_map_csv() const {
    std::string out = "original,emitted\n";
    for (const auto& [orig, emitted] : name_map) out += orig + "," + emitted + "\n";
    return out;
}

MpsDocument export_mps(const Problem& p, const std::string& model_name) {
    p.validate();
    MpsDocument doc;

    bool all_safe = true;
    {
        std::map<std::string, int> seen;
        for (const auto& v : p.variables) {
            if (!mps_safe(v.name) || ++seen[v.name] > 1) all_safe = false;
        }
        for (const auto& c : p.constraints) {
            if (!mps_safe(c.name) || ++seen[c.name] > 1) all_safe = false;
        }
        if (seen.count("COST")) all_safe = false;
    }

    std::vector<std::string> row_names(p.constraints.size());
    std::vector<std::string> col_names(p.variables.size());
    for (std::size_t i = 0; i < p.constraints.size(); ++i)
        row_names[i] = all_safe ? p.constraints[i].name : sequential_name('R', static_cast<int>(i));
    for (std::size_t j = 0; j < p.variables.size(); ++j)
        col_names[j] = all_safe ? p.variables[j].name : sequential_name('C', static_cast<int>(j));
    if (!all_safe) {
        for (std::size_t i = 0; i < p.constraints.size(); ++i)
            doc.name_map.push_back({p.constraints[i].name, row_names[i]});
        for (std::size_t j = 0; j < p.variables.size(); ++j)
            doc.name_map.push_back({p.variables[j].name, col_names[j]});
    }

    std::string& out = doc.text;
    out += "NAME          " + model_name + "\n";
    out += "ROWS\n";
    out += field_line("N", "COST", "");
    for (std::size_t i = 0; i < p.constraints.size(); ++i) {
        const char* rel = p.constraints[i].rel == Relation::LessEqual      ? "L"
                          : p.constraints[i].rel == Relation::GreaterEqual ? "G"
                                                                           : "E";
        out += field_line(rel, row_names[i], "");
    }

    // column-major entries, objective first, rows in declaration order
    std::vector<std::vector<std::pair<int, double>>> col_entries(p.variables.size());
    for (std::size_t i = 0; i < p.constraints.size(); ++i)
        for (const auto& [j, coef] : p.constraints[i].terms)
            col_entries[static_cast<std::size_t>(j)].push_back({static_cast<int>(i), coef});

    out += "COLUMNS\n";
    bool in_int = false;
    int marker = 0;
    for (std::size_t j = 0; j < p.variables.size(); ++j) {
        const bool want_int = p.variables[j].integral;
        if (want_int != in_int) {
            out += field_line("", "MARKER" + std::to_string(marker++), "'MARKER'", "",
                              want_int ? "'INTORG'" : "'INTEND'");
            in_int = want_int;
        }
        if (p.objective[j] != 0.0)
            out += field_line("", col_names[j], "COST", format_number(p.objective[j]));
        for (const auto& [i, coef] : col_entries[j])
            out += field_line("", col_names[j], row_names[static_cast<std::size_t>(i)],
                              format_number(coef));
        // keep empty columns visible to parsers
        if (p.objective[j] == 0.0 && col_entries[j].empty())
            out += field_line("", col_names[j], "COST", "0");
    }
    if (in_int) out += field_line("", "MARKER" + std::to_string(marker++), "'MARKER'", "", "'INTEND'");

    out += "RHS\n";
    for (std::size_t i = 0; i < p.constraints.size(); ++i)
        if (p.constraints[i].rhs != 0.0)
            out += field_line("", "RHS", row_names[i], format_number(p.constraints[i].rhs));

    out += "BOUNDS\n";
    for (std::size_t j = 0; j < p.variables.size(); ++j) {
        const auto& v = p.variables[j];
        const std::string& cn = col_names[j];
        if (v.integral && v.lower == 0.0 && v.upper == 1.0) {
            out += field_line("BV", "BND", cn);
            continue;
        }
        if (v.lower == v.upper) {
            out += field_line("FX", "BND", cn, format_number(v.lower));
            continue;
        }
        if (v.lower == -kInf && v.upper == kInf) {
            out += field_line("FR", "BND", cn);
            continue;
        }
        if (v.lower == -kInf)
            out += field_line("MI", "BND", cn);
        else if (v.lower != 0.0)
            out += field_line("LO", "BND", cn, format_number(v.lower));
        if (v.upper != kInf) out += field_line("UP", "BND", cn, format_number(v.upper));
    }
    out += "ENDATA\n";
    return doc;
}

namespace {

std::vector<std::string> tokens_of(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream ss(line);
    std::string t;
    while (ss >> t) toks.push_back(t);
    return toks;
}

[[noreturn]] void parse_fail(int line_no, const std::string& why) {
    throw std::runtime_error("MPS parse error at line " + std::to_string(line_no) + ": " + why);
}

double parse_value(const std::string& s, int line_no) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) parse_fail(line_no, "bad number '" + s + "'");
        return v;
    } catch (const std::invalid_argument&) {
        parse_fail(line_no, "bad number '" + s + "'");
    } catch (const std::out_of_range&) {
        parse_fail(line_no, "number out of range '" + s + "'");
    }
}

} // namespace

Problem import_mps(const std::string& text) {
    Problem p;
    std::map<std::string, int> row_index;   // constraint rows only
    std::map<std::string, int> col_index;
    std::map<std::string, Relation> row_rel;
    std::string obj_row;
    std::vector<std::map<int, double>> row_terms; // per constraint, var -> coef
    enum class Section { None, Rows, Columns, Rhs, Bounds, Ranges, Done };
    Section section = Section::None;
    bool integer_mode = false;

    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '*') continue;
        const bool header = !std::isspace(static_cast<unsigned char>(line[0]));
        auto toks = tokens_of(line);
        if (toks.empty()) continue;

        if (header) {
            const std::string& kw = toks[0];
            if (kw == "NAME") continue;
            if (kw == "ROWS") { section = Section::Rows; continue; }
            if (kw == "COLUMNS") { section = Section::Columns; continue; }
            if (kw == "RHS") { section = Section::Rhs; continue; }
            if (kw == "BOUNDS") { section = Section::Bounds; continue; }
            if (kw == "RANGES") parse_fail(line_no, "RANGES section not supported");
            if (kw == "OBJSENSE" || kw == "OBJSENSE:") parse_fail(line_no, "OBJSENSE not supported");
            if (kw == "ENDATA") { section = Section::Done; break; }
            parse_fail(line_no, "unknown section '" + kw + "'");
        }

        switch (section) {
            case Section::Rows: {
                if (toks.size() != 2) parse_fail(line_no, "expected <type> <name>");
                const std::string& ty = toks[0];
                if (ty == "N") {
                    if (obj_row.empty()) obj_row = toks[1];
                    // additional free rows are ignored
                } else if (ty == "L" || ty == "G" || ty == "E") {
                    const Relation rel = ty == "L"   ? Relation::LessEqual
                                         : ty == "G" ? Relation::GreaterEqual
                                                     : Relation::Equal;
                    row_index[toks[1]] = p.add_constraint(toks[1], {}, rel, 0.0);
                    row_rel[toks[1]] = rel;
                    row_terms.emplace_back();
                } else {
                    parse_fail(line_no, "unknown row type '" + ty + "'");
                }
                break;
            }
            case Section::Columns: {
                if (toks.size() >= 3 && toks[1] == "'MARKER'") {
                    if (toks[2] == "'INTORG'") integer_mode = true;
                    else if (toks[2] == "'INTEND'") integer_mode = false;
                    else parse_fail(line_no, "unknown marker");
                    break;
                }
                if (toks.size() >= 5 && (toks[2] == "'INTORG'" || toks[2] == "'INTEND'")) {
                    integer_mode = toks[2] == "'INTORG'";
                    break;
                }
                if (toks.size() >= 4 && toks[1] == "'MARKER'") parse_fail(line_no, "bad marker line");
                if (toks.size() < 3 || toks.size() % 2 == 0)
                    parse_fail(line_no, "expected <col> (<row> <value>)+");
                const std::string& cn = toks[0];
                int j;
                if (auto it = col_index.find(cn); it != col_index.end()) {
                    j = it->second;
                } else {
                    j = p.add_variable(cn, 0.0, kInf, integer_mode);
                    col_index[cn] = j;
                }
                for (std::size_t k = 1; k + 1 < toks.size(); k += 2) {
                    const double v = parse_value(toks[k + 1], line_no);
                    if (toks[k] == obj_row) {
                        p.objective[static_cast<std::size_t>(j)] += v;
                    } else {
                        auto it = row_index.find(toks[k]);
                        if (it == row_index.end()) parse_fail(line_no, "unknown row '" + toks[k] + "'");
                        row_terms[static_cast<std::size_t>(it->second)][j] += v;
                    }
                }
                break;
            }
            case Section::Rhs: {
                if (toks.size() < 3 || toks.size() % 2 == 0)
                    parse_fail(line_no, "expected <set> (<row> <value>)+");
                for (std::size_t k = 1; k + 1 < toks.size(); k += 2) {
                    if (toks[k] == obj_row) continue; // objective constant ignored
                    auto it = row_index.find(toks[k]);
                    if (it == row_index.end()) parse_fail(line_no, "unknown row '" + toks[k] + "'");
                    p.constraints[static_cast<std::size_t>(it->second)].rhs =
                        parse_value(toks[k + 1], line_no);
                }
                break;
            }
            case Section::Bounds: {
                if (toks.size() < 3) parse_fail(line_no, "expected <type> <set> <col> [value]");
                const std::string& ty = toks[0];
                auto it = col_index.find(toks[2]);
                if (it == col_index.end()) parse_fail(line_no, "unknown column '" + toks[2] + "'");
                Variable& v = p.variables[static_cast<std::size_t>(it->second)];
                auto need_value = [&]() -> double {
                    if (toks.size() < 4) parse_fail(line_no, "bound type '" + ty + "' needs a value");
                    return parse_value(toks[3], line_no);
                };
                if (ty == "UP") v.upper = need_value();
                else if (ty == "LO") v.lower = need_value();
                else if (ty == "FX") { v.lower = v.upper = need_value(); }
                else if (ty == "FR") { v.lower = -kInf; v.upper = kInf; }
                else if (ty == "MI") v.lower = -kInf;
                else if (ty == "PL") v.upper = kInf;
                else if (ty == "BV") { v.lower = 0.0; v.upper = 1.0; v.integral = true; }
                else if (ty == "UI") { v.upper = need_value(); v.integral = true; }
                else if (ty == "LI") { v.lower = need_value(); v.integral = true; }
                else parse_fail(line_no, "unknown bound type '" + ty + "'");
                break;
            }
            case Section::None:
            case Section::Ranges:
            case Section::Done:
                parse_fail(line_no, "data outside any section");
        }
    }
    if (section != Section::Done) parse_fail(line_no, "missing ENDATA");
    if (obj_row.empty()) parse_fail(line_no, "no objective row declared");

    for (std::size_t i = 0; i < p.constraints.size(); ++i) {
        auto& terms = p.constraints[i].terms;
        terms.reserve(row_terms[i].size());
        for (const auto& [j, coef] : row_terms[i]) terms.push_back({j, coef});
    }
    p.validate();
    return p;
}

} // namespace gridfc::lp
