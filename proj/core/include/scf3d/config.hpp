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

#ifndef SCF3D_CONFIG_HPP
#define SCF3D_CONFIG_HPP

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace scf3d
{
    // Malformed file, unknown key or unparsable value. The CLI maps it to exit code 2.
    class ConfigError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Line-oriented "key = value" text with [section] headers. '#' and ';' start comments.
    // Keys before the first header belong to the section "".
    class ConfigFile
    {
    public:
        static ConfigFile parse(std::istream &in, const std::string &origin = "<input>");
        static ConfigFile load(const std::string &path);

        bool has_section(const std::string &section) const;
        const std::map<std::string, std::string> &section(const std::string &section) const;
        std::vector<std::string> section_names() const;

        // "section.key=value" or "key=value" (section "").
        void apply_assignment(const std::string &assignment);
        void set(const std::string &section, const std::string &key, const std::string &value);

    private:
        std::map<std::string, std::map<std::string, std::string>> sections_;
    };

    // Ordered parameter set with defaults. Every entry carries a tag that ends up in the CSV
    // metadata; overriding a key that has no default is a ConfigError.
    class Params
    {
    public:
        struct Entry
        {
            std::string key;
            std::string value;
            std::string tag;
            std::string note;
        };

        Params &add(const std::string &key, const std::string &value, const std::string &tag,
                    const std::string &note = "");

        void override_with(const std::map<std::string, std::string> &values, const std::string &origin);
        void override_one(const std::string &key, const std::string &value, const std::string &origin);
        // Replaces a declared default, keeping it a default rather than an override.
        void redefine(const std::string &key, const std::string &value, const std::string &tag,
                      const std::string &note = "");
        bool has(const std::string &key) const;

        std::string str(const std::string &key) const;
        double real(const std::string &key) const;
        long integer(const std::string &key) const;
        bool flag(const std::string &key) const;
        std::vector<double> reals(const std::string &key) const;
        std::vector<long> integers(const std::string &key) const;

        const std::vector<Entry> &entries() const { return entries_; }
        // "# key = value  # tag" lines.
        std::vector<std::string> metadata() const;

    private:
        const Entry &find(const std::string &key) const;
        std::vector<Entry> entries_;
    };

    double parse_real(const std::string &text, const std::string &what);
    long parse_integer(const std::string &text, const std::string &what);
    bool parse_flag(const std::string &text, const std::string &what);
    std::vector<std::string> split_list(const std::string &text);
}

#endif
