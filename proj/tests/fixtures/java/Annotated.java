package fixtures.tagged;

@CodeSmell(type=CodeSmellType.LargeClass, description="Too many functionalities")
public class Customer {
    private int id;

    @CodeSmell(type=CodeSmellType.LongMethod, description="needs split")
    public int checkout(int amount) {
        int fee = 0;
        if (amount > 100) {
            fee = 2;
        }
        return amount + fee + id;
    }

    public int ping() {
        return id;
    }
}

interface Greeter {
    String NAME = "greeter";

    String greet(String who);

    default String loud(String who) {
        return greet(who) + "!";
    }
}
