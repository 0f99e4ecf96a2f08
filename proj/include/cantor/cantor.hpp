#pragma once

#include "cantor/base_tree.hpp"
#include "cantor/boolean_group.hpp"
#include "cantor/errors.hpp"
#include "cantor/maltsev.hpp"
#include "cantor/point.hpp"
#include "cantor/random.hpp"
#include "cantor/retraction.hpp"
#include "cantor/word.hpp"
