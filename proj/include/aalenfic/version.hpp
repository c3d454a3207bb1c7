#pragma once

#define AALENFIC_VERSION "0.1.0"
