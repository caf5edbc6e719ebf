package control;

import java.util.List;

class Flow {
    int total;

    int loop(List<Integer> items) {
        for (int i = 0; i < items.size(); i++) {
            total += items.get(i);
        }
        for (Integer item : items) {
            if (item > 3) {
                continue;
            } else if (item < 0) {
                break;
            }
        }
        while (total > 100) total -= 10;
        do {
            total++;
        } while (total < 5);
        return total;
    }

    void guard(Object o) {
        try {
            check(o);
        } catch (IllegalStateException e) {
            throw e;
        } finally {
            ;
        }
        synchronized (this) {
            total = 0;
        }
        switch (total) {
            case 0:
                total = 1;
                break;
            default:
                total = 2;
        }
        assert total > 0;
    }

    void check(Object o) {
        label:
        for (;;) {
            break label;
        }
    }
}
