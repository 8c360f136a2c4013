// SPDX-License-Identifier: Apache-2.0
//
// scf3d: spatial correlation and mutual information of 3D MIMO channels
// Copyright (C) 2026 The scf3d authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "scf3d/config.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace scf3d
{
    namespace
    {
        std::string trim(const std::string &s)
        {
            const auto b = s.find_first_not_of(" \t\r\n");
            if (b == std::string::npos)
                return {};
            const auto e = s.find_last_not_of(" \t\r\n");
            return s.substr(b, e - b + 1);
        }

        std::string strip_comment(const std::string &s)
        {
            // A comment starts at '#' or ';' at line start or after whitespace.
            for (std::size_t i = 0; i < s.size(); ++i)
                if ((s[i] == '#' || s[i] == ';') && (i == 0 || std::isspace((unsigned char)s[i - 1])))
                    return s.substr(0, i);
            return s;
        }

        bool valid_name(const std::string &s)
        {
            if (s.empty())
                return false;
            return std::all_of(s.begin(), s.end(), [](char c) {
                return std::isalnum((unsigned char)c) || c == '_' || c == '-' || c == '.';
            });
        }
    }

    ConfigFile ConfigFile::parse(std::istream &in, const std::string &origin)
    {
        ConfigFile cfg;
        std::string line, current;
        int number = 0;
        cfg.sections_[""];
        while (std::getline(in, line))
        {
            ++number;
            const std::string body = trim(strip_comment(line));
            if (body.empty())
                continue;
            const std::string where = origin + ":" + std::to_string(number);
            if (body.front() == '[')
            {
                if (body.back() != ']')
                    throw ConfigError(where + ": malformed section header");
                current = trim(body.substr(1, body.size() - 2));
                if (!valid_name(current))
                    throw ConfigError(where + ": invalid section name '" + current + "'");
                cfg.sections_[current];
                continue;
            }
            const auto eq = body.find('=');
            if (eq == std::string::npos)
                throw ConfigError(where + ": expected 'key = value'");
            const std::string key = trim(body.substr(0, eq));
            const std::string value = trim(body.substr(eq + 1));
            if (!valid_name(key))
                throw ConfigError(where + ": invalid key '" + key + "'");
            auto &sec = cfg.sections_[current];
            if (sec.count(key))
                throw ConfigError(where + ": duplicate key '" + key + "'");
            sec[key] = value;
        }
        return cfg;
    }

    ConfigFile ConfigFile::load(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("cannot open config file " + path);
        return parse(in, path);
    }

    bool ConfigFile::has_section(const std::string &s) const { return sections_.count(s) > 0; }

    const std::map<std::string, std::string> &ConfigFile::section(const std::string &s) const
    {
        static const std::map<std::string, std::string> empty;
        const auto it = sections_.find(s);
        return it == sections_.end() ? empty : it->second;
    }

    std::vector<std::string> ConfigFile::section_names() const
    {
        std::vector<std::string> out;
        for (const auto &kv : sections_)
            out.push_back(kv.first);
        return out;
    }

    void ConfigFile::apply_assignment(const std::string &assignment)
    {
        const auto eq = assignment.find('=');
        if (eq == std::string::npos)
            throw ConfigError("--set expects key=value, got '" + assignment + "'");
        std::string lhs = trim(assignment.substr(0, eq));
        const std::string value = trim(assignment.substr(eq + 1));
        std::string sec;
        // Section names may contain '-', keys never contain '.', so split at the last dot.
        const auto dot = lhs.rfind('.');
        if (dot != std::string::npos)
        {
            sec = lhs.substr(0, dot);
            lhs = lhs.substr(dot + 1);
        }
        if (!valid_name(lhs))
            throw ConfigError("--set: invalid key '" + lhs + "'");
        sections_[sec][lhs] = value;
    }

    void ConfigFile::set(const std::string &section, const std::string &key, const std::string &value)
    {
        sections_[section][key] = value;
    }

    Params &Params::add(const std::string &key, const std::string &value, const std::string &tag,
                        const std::string &note)
    {
        if (has(key))
            throw std::logic_error("duplicate parameter " + key);
        entries_.push_back({key, value, tag, note});
        return *this;
    }

    bool Params::has(const std::string &key) const
    {
        return std::any_of(entries_.begin(), entries_.end(), [&](const Entry &e) { return e.key == key; });
    }

    const Params::Entry &Params::find(const std::string &key) const
    {
        for (const auto &e : entries_)
            if (e.key == key)
                return e;
        throw std::logic_error("parameter " + key + " not declared");
    }

    void Params::override_one(const std::string &key, const std::string &value, const std::string &origin)
    {
        for (auto &e : entries_)
            if (e.key == key)
            {
                e.value = value;
                e.tag = "override";
                return;
            }
        throw ConfigError(origin + ": unknown key '" + key + "'");
    }

    void Params::redefine(const std::string &key, const std::string &value, const std::string &tag,
                          const std::string &note)
    {
        for (auto &e : entries_)
            if (e.key == key)
            {
                e = Entry{key, value, tag, note};
                return;
            }
        throw std::logic_error("parameter " + key + " not declared");
    }

    void Params::override_with(const std::map<std::string, std::string> &values, const std::string &origin)
    {
        for (const auto &kv : values)
            override_one(kv.first, kv.second, origin);
    }

    std::string Params::str(const std::string &key) const { return find(key).value; }
    double Params::real(const std::string &key) const { return parse_real(find(key).value, key); }
    long Params::integer(const std::string &key) const { return parse_integer(find(key).value, key); }
    bool Params::flag(const std::string &key) const { return parse_flag(find(key).value, key); }

    std::vector<double> Params::reals(const std::string &key) const
    {
        std::vector<double> out;
        for (const auto &item : split_list(find(key).value))
            out.push_back(parse_real(item, key));
        if (out.empty())
            throw ConfigError(key + ": empty list");
        return out;
    }

    std::vector<long> Params::integers(const std::string &key) const
    {
        std::vector<long> out;
        for (const auto &item : split_list(find(key).value))
            out.push_back(parse_integer(item, key));
        if (out.empty())
            throw ConfigError(key + ": empty list");
        return out;
    }

    std::vector<std::string> Params::metadata() const
    {
        std::vector<std::string> out;
        for (const auto &e : entries_)
        {
            std::string line = "# " + e.key + " = " + e.value + "  # " + e.tag;
            if (!e.note.empty())
                line += ": " + e.note;
            out.push_back(line);
        }
        return out;
    }

    double parse_real(const std::string &text, const std::string &what)
    {
        const std::string t = trim(text);
        char *end = nullptr;
        errno = 0;
        const double v = std::strtod(t.c_str(), &end);
        if (t.empty() || *end != '\0' || errno == ERANGE || !std::isfinite(v))
            throw ConfigError(what + ": '" + text + "' is not a finite number");
        return v;
    }

    long parse_integer(const std::string &text, const std::string &what)
    {
        const std::string t = trim(text);
        char *end = nullptr;
        errno = 0;
        const long v = std::strtol(t.c_str(), &end, 10);
        if (t.empty() || *end != '\0' || errno == ERANGE)
            throw ConfigError(what + ": '" + text + "' is not an integer");
        return v;
    }

    bool parse_flag(const std::string &text, const std::string &what)
    {
        std::string t = trim(text);
        std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return char(std::tolower(c)); });
        if (t == "true" || t == "yes" || t == "on" || t == "1")
            return true;
        if (t == "false" || t == "no" || t == "off" || t == "0")
            return false;
        throw ConfigError(what + ": '" + text + "' is not a boolean");
    }

    std::vector<std::string> split_list(const std::string &text)
    {
        std::vector<std::string> out;
        std::string item;
        std::istringstream in(text);
        while (std::getline(in, item, ','))
        {
            item = trim(item);
            if (!item.empty())
                out.push_back(item);
        }
        return out;
    }
}
