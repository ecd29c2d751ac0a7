#include "kcp/cli.hpp"
