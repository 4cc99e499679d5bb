#include <gtest/gtest.h>

#include "talg/talg.hpp"
