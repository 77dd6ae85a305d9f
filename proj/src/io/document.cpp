#include "balance_nets/io/document.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace balance_nets::io {

  namespace {
    // Navigates raw JSON text along a pointer without building values. Used
    // only to anchor error messages, so the text is known to be valid.
    class Locator {
     public:
      explicit Locator(std::string_view text) : _text(text) {}

      std::size_t find(std::vector<std::string> const& tokens) {
        skip_ws();
        std::size_t best = _pos;
        for (auto const& token : tokens) {
          if (!descend(token)) {
            break;
          }
          skip_ws();
          best = _pos;
        }
        return best;
      }

     private:
      bool at_end() const {
        return _pos >= _text.size();
      }

      void skip_ws() {
        while (!at_end() && (_text[_pos] == ' ' || _text[_pos] == '\n' || _text[_pos] == '\r'
                             || _text[_pos] == '\t')) {
          ++_pos;
        }
      }

      std::string read_string() {
        std::string out;
        ++_pos;  // opening quote
        while (!at_end() && _text[_pos] != '"') {
          if (_text[_pos] == '\\' && _pos + 1 < _text.size()) {
            char const c = _text[++_pos];
            switch (c) {
              case 'n': out += '\n'; break;
              case 't': out += '\t'; break;
              case 'r': out += '\r'; break;
              case 'b': out += '\b'; break;
              case 'f': out += '\f'; break;
              case 'u': out += "\\u"; break;
              default: out += c;
            }
          } else {
            out += _text[_pos];
          }
          ++_pos;
        }
        ++_pos;  // closing quote
        return out;
      }

      void skip_value() {
        skip_ws();
        if (at_end()) {
          return;
        }
        char const c = _text[_pos];
        if (c == '"') {
          read_string();
          return;
        }
        if (c == '{' || c == '[') {
          std::size_t depth = 0;
          while (!at_end()) {
            char const d = _text[_pos];
            if (d == '"') {
              read_string();
              continue;
            }
            if (d == '{' || d == '[') {
              ++depth;
            } else if (d == '}' || d == ']') {
              if (--depth == 0) {
                ++_pos;
                return;
              }
            }
            ++_pos;
          }
          return;
        }
        while (!at_end() && _text[_pos] != ',' && _text[_pos] != '}' && _text[_pos] != ']') {
          ++_pos;
        }
      }

      bool descend(std::string const& token) {
        skip_ws();
        if (at_end()) {
          return false;
        }
        std::size_t const start = _pos;
        if (_text[_pos] == '{') {
          ++_pos;
          while (true) {
            skip_ws();
            if (at_end() || _text[_pos] != '"') {
              break;
            }
            std::string const key = read_string();
            skip_ws();
            ++_pos;  // colon
            skip_ws();
            if (key == token) {
              return true;
            }
            skip_value();
            skip_ws();
            if (at_end() || _text[_pos] != ',') {
              break;
            }
            ++_pos;
          }
        } else if (_text[_pos] == '[') {
          std::size_t index = 0;
          try {
            index = std::stoul(token);
          } catch (std::exception const&) {
            _pos = start;
            return false;
          }
          ++_pos;
          for (std::size_t k = 0;; ++k) {
            skip_ws();
            if (at_end() || _text[_pos] == ']') {
              break;
            }
            if (k == index) {
              return true;
            }
            skip_value();
            skip_ws();
            if (at_end() || _text[_pos] != ',') {
              break;
            }
            ++_pos;
          }
        }
        _pos = start;
        return false;
      }

      std::string_view _text;
      std::size_t      _pos = 0;
    };

    std::vector<std::string> pointer_tokens(Json::json_pointer pointer) {
      std::vector<std::string> tokens;
      while (!pointer.empty()) {
        tokens.push_back(pointer.back());
        pointer.pop_back();
      }
      std::reverse(tokens.begin(), tokens.end());
      return tokens;
    }

    std::string type_name(Json const& j) {
      return j.type_name();
    }
  }  // namespace

  std::string sha256_hex(std::string_view bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int                               length = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
      fail(ErrorCode::numerical, "SHA-256 digest failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string           out;
    out.reserve(2 * length);
    for (unsigned int k = 0; k < length; ++k) {
      out += hex[digest[k] >> 4];
      out += hex[digest[k] & 0xF];
    }
    return out;
  }

  std::string read_text(std::filesystem::path const& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      fail(ErrorCode::invalid_input, "cannot read " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
  }

  SourcePosition position_of(std::string_view text, std::size_t offset) {
    SourcePosition p;
    offset = std::min(offset, text.size());
    for (std::size_t k = 0; k < offset; ++k) {
      if (text[k] == '\n') {
        ++p.line;
        p.column = 1;
      } else {
        ++p.column;
      }
    }
    return p;
  }

  ////////////////////////////////////////////////////////////////////////
  // Document
  ////////////////////////////////////////////////////////////////////////

  std::shared_ptr<Document const> Document::parse(std::string text, std::string source) {
    auto doc     = std::shared_ptr<Document>(new Document());
    doc->_text   = std::move(text);
    doc->_source = std::move(source);
    try {
      doc->_root = Json::parse(doc->_text);
    } catch (Json::parse_error const& e) {
      // e.byte is 1-based and points just past the offending character.
      auto const  pos  = position_of(doc->_text, e.byte == 0 ? 0 : e.byte - 1);
      std::string what = e.what();
      auto const  tail = what.find(": ", what.find("parse error"));
      if (tail != std::string::npos) {
        what = what.substr(tail + 2);
      }
      fail(ErrorCode::parse,
           doc->_source + ":" + std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": "
               + what);
    }
    return doc;
  }

  std::shared_ptr<Document const> Document::load(std::filesystem::path const& path) {
    auto doc = parse(read_text(path), path.string());
    std::const_pointer_cast<Document>(doc)->_base = path.parent_path();
    return doc;
  }

  SourcePosition Document::locate(Json::json_pointer const& pointer) const {
    Locator locator(_text);
    return position_of(_text, locator.find(pointer_tokens(pointer)));
  }

  void Document::fail_at(Json::json_pointer const& pointer,
                         std::string const&        message,
                         ErrorCode                 code) const {
    auto const        pos  = locate(pointer);
    std::string const path = pointer.empty() ? "/" : pointer.to_string();
    fail(code,
         _source + ":" + std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + path
             + ": " + message);
  }

  ////////////////////////////////////////////////////////////////////////
  // Node
  ////////////////////////////////////////////////////////////////////////

  Node::Node(std::shared_ptr<Document const> doc)
      : _doc(std::move(doc)), _value(&_doc->root()), _pointer() {}

  Node::Node(std::shared_ptr<Document const> doc, Json const* value, Json::json_pointer pointer)
      : _doc(std::move(doc)), _value(value), _pointer(std::move(pointer)) {}

  Node Node::at(std::string const& key) const {
    if (!_value->is_object()) {
      fail("expected an object, found " + type_name(*_value));
    }
    auto it = _value->find(key);
    if (it == _value->end()) {
      fail("missing key \"" + key + "\"");
    }
    return Node(_doc, &*it, _pointer / key);
  }

  std::optional<Node> Node::find(std::string const& key) const {
    if (!_value->is_object()) {
      fail("expected an object, found " + type_name(*_value));
    }
    auto it = _value->find(key);
    if (it == _value->end() || it->is_null()) {
      return std::nullopt;
    }
    return Node(_doc, &*it, _pointer / key);
  }

  Node Node::at(std::size_t index) const {
    if (index >= size()) {
      fail("index " + std::to_string(index) + " out of range");
    }
    return Node(_doc, &(*_value)[index], _pointer / index);
  }

  std::size_t Node::size() const {
    if (!_value->is_array()) {
      fail("expected an array, found " + type_name(*_value));
    }
    return _value->size();
  }

  std::string Node::as_string() const {
    if (!_value->is_string()) {
      fail("expected a string, found " + type_name(*_value));
    }
    return _value->get<std::string>();
  }

  double Node::as_number() const {
    if (!_value->is_number()) {
      fail("expected a number, found " + type_name(*_value));
    }
    double const v = _value->get<double>();
    if (!std::isfinite(v)) {
      fail("expected a finite number");
    }
    return v;
  }

  bool Node::as_bool() const {
    if (!_value->is_boolean()) {
      fail("expected a boolean, found " + type_name(*_value));
    }
    return _value->get<bool>();
  }

  std::size_t Node::as_size() const {
    return static_cast<std::size_t>(as_uint64());
  }

  std::uint64_t Node::as_uint64() const {
    if (_value->is_number_unsigned()) {
      return _value->get<std::uint64_t>();
    }
    if (_value->is_number_integer()) {
      fail("expected a non-negative integer, found " + _value->dump());
    }
    fail("expected a non-negative integer, found " + type_name(*_value));
  }

  void Node::allow_keys(std::initializer_list<std::string_view> allowed) const {
    if (!_value->is_object()) {
      fail("expected an object, found " + type_name(*_value));
    }
    for (auto const& item : _value->items()) {
      if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
        _doc->fail_at(_pointer / item.key(), "unknown key \"" + item.key() + "\"");
      }
    }
  }

  void Node::fail(std::string const& message, ErrorCode code) const {
    _doc->fail_at(_pointer, message, code);
  }

}  // namespace balance_nets::io
