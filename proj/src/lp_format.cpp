// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 the cfran authors

#include "cfran/lp_format.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

namespace cfran {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void append_terms(std::string& out,
                  const std::vector<std::pair<int, double>>& terms,
                  const std::vector<std::string>& names) {
  int on_line = 0;
  for (const auto& [j, a] : terms) {
    out += a < 0.0 ? " - " : " + ";
    out += num(std::abs(a));
    out += " ";
    out += names[j];
    if (++on_line % 8 == 0 && on_line < static_cast<int>(terms.size())) {
      out += "\n   ";
    }
  }
  if (terms.empty()) out += " 0 " + names[0];
}

}  // namespace

std::string write_lp(const MilpModel& model) {
  std::string out;
  out += "\\ cfran fronthaul placement/routing model\n";
  out += "Minimize\n obj:";
  std::vector<std::pair<int, double>> obj_terms;
  for (int j = 0; j < model.num_vars(); ++j) {
    if (model.objective[j] != 0.0) obj_terms.emplace_back(j, model.objective[j]);
  }
  append_terms(out, obj_terms, model.var_names);
  out += "\nSubject To\n";
  for (const auto& row : model.rows) {
    out += " " + row.name + ":";
    append_terms(out, row.terms, model.var_names);
    switch (row.sense) {
      case lp::RowSense::kLe: out += " <= "; break;
      case lp::RowSense::kGe: out += " >= "; break;
      case lp::RowSense::kEq: out += " = "; break;
    }
    out += num(row.rhs);
    out += "\n";
  }

  out += "Bounds\n";
  for (int j = 0; j < model.num_vars(); ++j) {
    const double lb = model.lower[j];
    const double ub = model.upper[j];
    const bool lb_inf = std::isinf(lb);
    const bool ub_inf = std::isinf(ub);
    if (model.is_binary[j] && lb == 0.0 && ub == 1.0) continue;
    if (lb == 0.0 && ub_inf) continue;  // LP-format default
    if (lb_inf && ub_inf) {
      out += " " + model.var_names[j] + " free\n";
    } else if (lb == ub) {
      out += " " + model.var_names[j] + " = " + num(lb) + "\n";
    } else if (lb_inf) {
      out += " -inf <= " + model.var_names[j] + " <= " + num(ub) + "\n";
    } else if (ub_inf) {
      out += " " + model.var_names[j] + " >= " + num(lb) + "\n";
    } else {
      out += " " + num(lb) + " <= " + model.var_names[j] + " <= " + num(ub) + "\n";
    }
  }

  bool any_binary = false;
  for (auto b : model.is_binary) any_binary = any_binary || b != 0;
  if (any_binary) {
    out += "Binaries\n";
    int on_line = 0;
    for (int j = 0; j < model.num_vars(); ++j) {
      if (!model.is_binary[j]) continue;
      out += " " + model.var_names[j];
      if (++on_line % 8 == 0) out += "\n";
    }
    if (on_line % 8 != 0) out += "\n";
  }
  out += "End\n";
  return out;
}

namespace {

struct Token {
  std::string text;
  bool is_number = false;
};

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    const char c = text[i];
    if (c == '\\') {  // comment to end of line
      while (i < n && text[i] != '\n') ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '<' || c == '>' || c == '=') {
      std::string op(1, c);
      if (i + 1 < n && text[i + 1] == '=') {
        op += '=';
        ++i;
      }
      ++i;
      tokens.push_back({op, false});
      continue;
    }
    if (c == '+' || c == '-' || c == ':') {
      tokens.push_back({std::string(1, c), false});
      ++i;
      continue;
    }
    // number or identifier
    std::size_t start = i;
    while (i < n && !std::isspace(static_cast<unsigned char>(text[i])) &&
           text[i] != '+' && text[i] != '-' && text[i] != '<' && text[i] != '>' &&
           text[i] != '=' && text[i] != ':' && text[i] != '\\') {
      ++i;
    }
    std::string word = text.substr(start, i - start);
    // Numbers may carry a signed exponent that the splitter above cut off.
    if (!word.empty() &&
        (std::isdigit(static_cast<unsigned char>(word[0])) || word[0] == '.')) {
      if ((word.back() == 'e' || word.back() == 'E') && i < n &&
          (text[i] == '+' || text[i] == '-')) {
        word += text[i++];
        while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) {
          word += text[i++];
        }
      }
      tokens.push_back({word, true});
    } else {
      tokens.push_back({word, false});
    }
  }
  return tokens;
}

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

bool is_section_keyword(const std::string& lower) {
  return lower == "minimize" || lower == "maximize" || lower == "min" ||
         lower == "max" || lower == "subject" || lower == "st" ||
         lower == "s.t." || lower == "bounds" || lower == "bound" ||
         lower == "binaries" || lower == "binary" || lower == "bin" ||
         lower == "generals" || lower == "general" || lower == "gen" ||
         lower == "end";
}

}  // namespace

MilpModel parse_lp(const std::string& text) {
  const std::vector<Token> tokens = tokenize(text);
  MilpModel model;
  std::map<std::string, int> index;

  const auto var_id = [&](const std::string& name) {
    if (auto it = index.find(name); it != index.end()) return it->second;
    const int id = model.num_vars();
    index[name] = id;
    model.var_names.push_back(name);
    model.objective.push_back(0.0);
    model.lower.push_back(0.0);
    model.upper.push_back(lp::kInf);
    model.is_binary.push_back(0);
    return id;
  };

  enum Section { kNone, kObjective, kRows, kBounds, kBinaries, kGenerals };
  Section section = kNone;
  double obj_sign = 1.0;
  std::size_t i = 0;
  const std::size_t n = tokens.size();

  const auto peek_lower = [&](std::size_t at) {
    return at < n ? lowercase(tokens[at].text) : std::string();
  };

  // Reads a linear expression (terms until a sense token or section keyword).
  const auto read_terms = [&](std::size_t& at,
                              std::vector<std::pair<int, double>>& terms) {
    double sign = 1.0;
    bool have_coeff = false;
    double coeff = 1.0;
    while (at < n) {
      const Token& tok = tokens[at];
      if (tok.text == "<=" || tok.text == ">=" || tok.text == "=" ||
          tok.text == "<" || tok.text == ">") {
        break;
      }
      const std::string lower = lowercase(tok.text);
      if (!tok.is_number && is_section_keyword(lower) && !have_coeff) break;
      if (tok.text == "+") {
        sign = 1.0;
        ++at;
        continue;
      }
      if (tok.text == "-") {
        sign = -sign;
        ++at;
        continue;
      }
      if (tok.is_number) {
        coeff = std::stod(tok.text);
        have_coeff = true;
        ++at;
        continue;
      }
      terms.emplace_back(var_id(tok.text), sign * (have_coeff ? coeff : 1.0));
      sign = 1.0;
      coeff = 1.0;
      have_coeff = false;
      ++at;
    }
  };

  while (i < n) {
    const std::string lower = peek_lower(i);
    if (lower == "minimize" || lower == "min") {
      section = kObjective;
      obj_sign = 1.0;
      ++i;
      continue;
    }
    if (lower == "maximize" || lower == "max") {
      section = kObjective;
      obj_sign = -1.0;
      ++i;
      continue;
    }
    if (lower == "subject" && peek_lower(i + 1) == "to") {
      section = kRows;
      i += 2;
      continue;
    }
    if (lower == "st" || lower == "s.t.") {
      section = kRows;
      ++i;
      continue;
    }
    if (lower == "bounds" || lower == "bound") {
      section = kBounds;
      ++i;
      continue;
    }
    if (lower == "binaries" || lower == "binary" || lower == "bin") {
      section = kBinaries;
      ++i;
      continue;
    }
    if (lower == "generals" || lower == "general" || lower == "gen") {
      section = kGenerals;
      ++i;
      continue;
    }
    if (lower == "end") break;

    switch (section) {
      case kObjective: {
        // optional "name:" prefix
        if (i + 1 < n && tokens[i + 1].text == ":") i += 2;
        std::vector<std::pair<int, double>> terms;
        read_terms(i, terms);
        for (const auto& [j, a] : terms) model.objective[j] += obj_sign * a;
        break;
      }
      case kRows: {
        std::string name;
        if (i + 1 < n && tokens[i + 1].text == ":") {
          name = tokens[i].text;
          i += 2;
        } else {
          name = "r" + std::to_string(model.rows.size());
        }
        MilpModel::Row row;
        row.name = name;
        read_terms(i, row.terms);
        if (i >= n) throw std::invalid_argument("lp parse: row without sense");
        const std::string sense = tokens[i].text;
        ++i;
        if (sense == "<=" || sense == "<") row.sense = lp::RowSense::kLe;
        else if (sense == ">=" || sense == ">") row.sense = lp::RowSense::kGe;
        else if (sense == "=") row.sense = lp::RowSense::kEq;
        else throw std::invalid_argument("lp parse: bad sense " + sense);
        double sign = 1.0;
        while (i < n && (tokens[i].text == "+" || tokens[i].text == "-")) {
          if (tokens[i].text == "-") sign = -sign;
          ++i;
        }
        if (i >= n || !tokens[i].is_number) {
          throw std::invalid_argument("lp parse: row without rhs");
        }
        row.rhs = sign * std::stod(tokens[i].text);
        ++i;
        model.rows.push_back(std::move(row));
        break;
      }
      case kBounds: {
        // forms: v free | v = a | v <= a | v >= a | a <= v <= b | -inf <= v <= b
        double first_sign = 1.0;
        while (i < n && (tokens[i].text == "+" || tokens[i].text == "-")) {
          if (tokens[i].text == "-") first_sign = -first_sign;
          ++i;
        }
        if (i >= n) break;
        if (tokens[i].is_number || lowercase(tokens[i].text) == "inf" ||
            lowercase(tokens[i].text) == "infinity") {
          const std::string low = lowercase(tokens[i].text);
          const double lo = (low == "inf" || low == "infinity")
                                ? first_sign * lp::kInf
                                : first_sign * std::stod(tokens[i].text);
          ++i;
          if (i >= n || (tokens[i].text != "<=" && tokens[i].text != "<")) {
            throw std::invalid_argument("lp parse: bad bound line");
          }
          ++i;
          const int j = var_id(tokens[i].text);
          ++i;
          model.lower[j] = lo;
          if (i < n && (tokens[i].text == "<=" || tokens[i].text == "<")) {
            ++i;
            double sign = 1.0;
            while (i < n && (tokens[i].text == "+" || tokens[i].text == "-")) {
              if (tokens[i].text == "-") sign = -sign;
              ++i;
            }
            const std::string up = lowercase(tokens[i].text);
            model.upper[j] = (up == "inf" || up == "infinity")
                                 ? sign * lp::kInf
                                 : sign * std::stod(tokens[i].text);
            ++i;
          }
        } else {
          const int j = var_id(tokens[i].text);
          ++i;
          if (i < n && lowercase(tokens[i].text) == "free") {
            model.lower[j] = -lp::kInf;
            model.upper[j] = lp::kInf;
            ++i;
            break;
          }
          if (i >= n) throw std::invalid_argument("lp parse: bad bound line");
          const std::string op = tokens[i].text;
          ++i;
          double sign = 1.0;
          while (i < n && (tokens[i].text == "+" || tokens[i].text == "-")) {
            if (tokens[i].text == "-") sign = -sign;
            ++i;
          }
          const std::string word = lowercase(tokens[i].text);
          const double value = (word == "inf" || word == "infinity")
                                   ? sign * lp::kInf
                                   : sign * std::stod(tokens[i].text);
          ++i;
          if (op == "<=" || op == "<") model.upper[j] = value;
          else if (op == ">=" || op == ">") model.lower[j] = value;
          else if (op == "=") model.lower[j] = model.upper[j] = value;
          else throw std::invalid_argument("lp parse: bad bound operator " + op);
        }
        break;
      }
      case kBinaries: {
        const int j = var_id(tokens[i].text);
        model.is_binary[j] = 1;
        model.lower[j] = std::max(model.lower[j], 0.0);
        if (std::isinf(model.upper[j])) model.upper[j] = 1.0;
        ++i;
        break;
      }
      case kGenerals: {
        // Integer variables other than binaries are accepted but treated as
        // binaries only when their bounds are {0, 1}.
        const int j = var_id(tokens[i].text);
        if (model.lower[j] == 0.0 && model.upper[j] == 1.0) model.is_binary[j] = 1;
        ++i;
        break;
      }
      case kNone:
        throw std::invalid_argument("lp parse: content before a section header");
    }
  }
  return model;
}

}  // namespace cfran
